#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "fintop/errors.hpp"

namespace fintop {

using PointId = std::string;
using PointSet = boost::dynamic_bitset<>;

inline std::string mask_key(const PointSet& s) {
    std::vector<PointSet::block_type> blocks(s.num_blocks());
    boost::to_block_range(s, blocks.begin());
    return std::string(reinterpret_cast<const char*>(blocks.data()),
                       blocks.size() * sizeof(PointSet::block_type));
}

/// Canonical ordering of subsets: by cardinality, then numerically.
inline bool mask_less(const PointSet& a, const PointSet& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
}

inline std::vector<std::size_t> mask_members(const PointSet& s) {
    std::vector<std::size_t> out;
    for (auto i = s.find_first(); i != PointSet::npos; i = s.find_next(i)) out.push_back(i);
    return out;
}

/**
 * A finite topological space in its minimal-open-set encoding.
 *
 * Finite spaces are exactly the finite Alexandrov spaces: the topology is
 * determined by assigning to each point x the smallest open set containing
 * it.  A table x -> minopen(x) encodes a topology iff it is reflexive
 * (x in minopen(x)) and transitive (y in minopen(x) implies
 * minopen(y) subset of minopen(x)).  Every point-set operation below is a
 * finite set computation against this table.
 *
 * Values are immutable; copies share the underlying representation, and
 * derived data (open sets, connected opens, subspaces) is cached per
 * representation.
 */
class FinSpace {
public:
    FinSpace() : impl_(empty_impl()) {}

    static FinSpace make(const std::vector<PointId>& points,
                         const std::map<PointId, std::vector<PointId>>& minopen_table) {
        auto impl = std::make_shared<Impl>();
        impl->names = points;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!impl->index.emplace(points[i], i).second)
                fail(ErrorKind::UnknownPoint, "duplicate point id '" + points[i] + "'");
        }
        impl->minopen.assign(points.size(), PointSet(points.size()));
        for (const auto& [p, members] : minopen_table) {
            auto it = impl->index.find(p);
            if (it == impl->index.end())
                fail(ErrorKind::UnknownPoint, "minopen table names unknown point '" + p + "'");
            PointSet m(points.size());
            for (const auto& q : members) {
                auto jt = impl->index.find(q);
                if (jt == impl->index.end())
                    fail(ErrorKind::UnknownPoint,
                         "minopen(" + p + ") names unknown point '" + q + "'");
                m.set(jt->second);
            }
            impl->minopen[it->second] = m;
        }
        if (minopen_table.size() != points.size())
            fail(ErrorKind::UnknownPoint, "minopen table must be total on the point set");
        validate(*impl);
        return FinSpace(std::move(impl));
    }

    /// Construction from prebuilt index-level minopen masks.
    static FinSpace make_indexed(std::vector<PointId> names, std::vector<PointSet> minopen) {
        auto impl = std::make_shared<Impl>();
        impl->names = std::move(names);
        impl->minopen = std::move(minopen);
        for (std::size_t i = 0; i < impl->names.size(); ++i) {
            if (!impl->index.emplace(impl->names[i], i).second)
                fail(ErrorKind::UnknownPoint, "duplicate point id '" + impl->names[i] + "'");
        }
        validate(*impl);
        return FinSpace(std::move(impl));
    }

    std::size_t size() const { return impl_->names.size(); }
    bool empty() const { return impl_->names.empty(); }
    const std::vector<PointId>& point_names() const { return impl_->names; }
    const PointId& name(std::size_t i) const { return impl_->names.at(i); }

    std::size_t index_of(const PointId& p) const {
        auto it = impl_->index.find(p);
        if (it == impl_->index.end()) fail(ErrorKind::UnknownPoint, "unknown point '" + p + "'");
        return it->second;
    }
    bool has_point(const PointId& p) const { return impl_->index.count(p) != 0; }

    const PointSet& minopen(std::size_t i) const { return impl_->minopen.at(i); }

    PointSet empty_set() const { return PointSet(size()); }
    PointSet full_set() const { return ~PointSet(size()); }

    PointSet set_of(const std::vector<PointId>& pts) const {
        PointSet s(size());
        for (const auto& p : pts) s.set(index_of(p));
        return s;
    }

    std::string describe(const PointSet& s) const {
        std::ostringstream os;
        os << "{";
        bool first = true;
        for (auto i : mask_members(s)) {
            if (!first) os << ",";
            os << name(i);
            first = false;
        }
        os << "}";
        return os.str();
    }

    void require_subset(const PointSet& s) const {
        if (s.size() != size())
            fail(ErrorKind::UnknownPoint, "subset mask sized for a different space");
    }

    bool is_open(const PointSet& s) const {
        require_subset(s);
        for (auto i : mask_members(s))
            if (!impl_->minopen[i].is_subset_of(s)) return false;
        return true;
    }

    bool is_closed(const PointSet& s) const {
        require_subset(s);
        return is_open(~s & full_set());
    }

    /// Smallest closed superset: { x : minopen(x) meets S }.
    PointSet closure(const PointSet& s) const {
        require_subset(s);
        PointSet out(size());
        for (std::size_t i = 0; i < size(); ++i)
            if (impl_->minopen[i].intersects(s)) out.set(i);
        return out;
    }

    /// Largest open subset: { x in S : minopen(x) subset of S }.
    PointSet interior(const PointSet& s) const {
        require_subset(s);
        PointSet out(size());
        for (auto i : mask_members(s))
            if (impl_->minopen[i].is_subset_of(s)) out.set(i);
        return out;
    }

    /// Two points are adjacent when one lies in the other's minimal open set.
    bool comparable(std::size_t a, std::size_t b) const {
        return impl_->minopen[a].test(b) || impl_->minopen[b].test(a);
    }

    /// Connected components of the subspace S, via the comparability graph
    /// restricted to S.  Returned in canonical order (by smallest member).
    std::vector<PointSet> components(const PointSet& s) const {
        require_subset(s);
        std::vector<PointSet> out;
        PointSet todo = s;
        while (todo.any()) {
            std::size_t seed = todo.find_first();
            PointSet comp(size());
            std::vector<std::size_t> stack{seed};
            comp.set(seed);
            todo.reset(seed);
            while (!stack.empty()) {
                std::size_t x = stack.back();
                stack.pop_back();
                for (auto y : mask_members(todo)) {
                    if (comparable(x, y)) {
                        comp.set(y);
                        todo.reset(y);
                        stack.push_back(y);
                    }
                }
            }
            out.push_back(comp);
        }
        return out;
    }

    bool is_connected(const PointSet& s) const {
        if (s.none()) return false;
        return components(s).size() == 1;
    }

    /// Subspace topology on S: minopen'(x) = minopen(x) & S.  Point names are
    /// preserved.  Results are cached so repeated queries share derived data.
    FinSpace subspace(const PointSet& s) const {
        require_subset(s);
        std::lock_guard<std::mutex> lock(impl_->cache_mutex);
        auto key = mask_key(s);
        auto it = impl_->subspaces.find(key);
        if (it != impl_->subspaces.end()) return FinSpace(it->second);

        auto sub = std::make_shared<Impl>();
        auto members = mask_members(s);
        std::vector<std::size_t> reindex(size(), PointSet::npos);
        for (std::size_t j = 0; j < members.size(); ++j) reindex[members[j]] = j;
        for (auto i : members) {
            sub->names.push_back(impl_->names[i]);
            PointSet m(members.size());
            for (auto q : mask_members(impl_->minopen[i] & s)) m.set(reindex[q]);
            sub->minopen.push_back(m);
        }
        for (std::size_t j = 0; j < sub->names.size(); ++j) sub->index.emplace(sub->names[j], j);
        impl_->subspaces.emplace(std::move(key), sub);
        return FinSpace(sub);
    }

    /// All open sets, canonically ordered (cardinality, then numeric mask).
    const std::vector<PointSet>& opens() const {
        std::lock_guard<std::mutex> lock(impl_->cache_mutex);
        if (!impl_->opens) {
            std::vector<PointSet> acc;
            enumerate_down_sets(acc);
            std::sort(acc.begin(), acc.end(), mask_less);
            impl_->opens = std::move(acc);
        }
        return *impl_->opens;
    }

    /// Non-empty connected open sets, canonically ordered.
    const std::vector<PointSet>& connected_opens() const {
        std::lock_guard<std::mutex> lock(impl_->cache_mutex);
        if (!impl_->connected_opens) {
            std::vector<PointSet> acc;
            enumerate_down_sets(acc);
            std::vector<PointSet> conn;
            for (auto& u : acc)
                if (u.any() && is_connected_nolock(u)) conn.push_back(u);
            std::sort(conn.begin(), conn.end(), mask_less);
            impl_->connected_opens = std::move(conn);
        }
        return *impl_->connected_opens;
    }

    /// Identity of the underlying representation; memoization key.
    const void* key() const { return impl_.get(); }

    bool operator==(const FinSpace& o) const {
        if (impl_ == o.impl_) return true;
        return impl_->names == o.impl_->names && impl_->minopen == o.impl_->minopen;
    }
    bool operator!=(const FinSpace& o) const { return !(*this == o); }

    /// Structure string independent of point names; equal strings <=> equal
    /// topologies after identifying points positionally.
    std::string structure_key() const {
        std::ostringstream os;
        os << size() << ";";
        for (const auto& m : impl_->minopen) {
            for (std::size_t i = 0; i < m.size(); ++i) os << (m.test(i) ? '1' : '0');
            os << ";";
        }
        return os.str();
    }

    // Scratch cache shared by higher-level modules (keyed strings -> masks or
    // flags).  Guarded by the same mutex as the structural caches.  Caches
    // live inside the representation so their lifetime matches the space.
    template <typename T>
    std::optional<T> cache_get(const std::string& key) const;
    template <typename T>
    void cache_put(const std::string& key, const T& value) const;

    const std::vector<std::pair<PointSet, PointSet>>* cached_pair_list(
        const std::string& key) const {
        std::lock_guard<std::mutex> lock(impl_->cache_mutex);
        auto it = impl_->pair_list_cache.find(key);
        return it == impl_->pair_list_cache.end() ? nullptr : &it->second;
    }
    const std::vector<std::pair<PointSet, PointSet>>& store_pair_list(
        const std::string& key, std::vector<std::pair<PointSet, PointSet>> value) const {
        std::lock_guard<std::mutex> lock(impl_->cache_mutex);
        return impl_->pair_list_cache.emplace(key, std::move(value)).first->second;
    }

private:
    struct Impl {
        std::vector<PointId> names;
        std::vector<PointSet> minopen;
        std::unordered_map<PointId, std::size_t> index;

        mutable std::mutex cache_mutex;
        mutable std::optional<std::vector<PointSet>> opens;
        mutable std::optional<std::vector<PointSet>> connected_opens;
        mutable std::unordered_map<std::string, std::shared_ptr<Impl>> subspaces;
        mutable std::unordered_map<std::string, bool> flag_cache;
        mutable std::unordered_map<std::string, std::string> blob_cache;
        mutable std::unordered_map<std::string, std::vector<std::pair<PointSet, PointSet>>>
            pair_list_cache;
    };

    explicit FinSpace(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

    static std::shared_ptr<Impl> empty_impl() {
        static std::shared_ptr<Impl> e = std::make_shared<Impl>();
        return e;
    }

    static void validate(const Impl& impl) {
        const std::size_t n = impl.names.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (impl.minopen[i].size() != n)
                fail(ErrorKind::UnknownPoint, "minopen mask size mismatch");
            if (!impl.minopen[i].test(i))
                fail(ErrorKind::NotReflexive,
                     "point '" + impl.names[i] + "' is missing from its own minimal open set");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (auto j : mask_members(impl.minopen[i])) {
                if (!impl.minopen[j].is_subset_of(impl.minopen[i]))
                    fail(ErrorKind::NotTransitive,
                         "minopen(" + impl.names[j] + ") is not contained in minopen(" +
                             impl.names[i] + ") although " + impl.names[j] + " lies in it");
            }
        }
    }

    bool is_connected_nolock(const PointSet& s) const {
        if (s.none()) return false;
        PointSet todo = s;
        std::size_t seed = todo.find_first();
        std::vector<std::size_t> stack{seed};
        todo.reset(seed);
        while (!stack.empty()) {
            std::size_t x = stack.back();
            stack.pop_back();
            for (auto y : mask_members(todo))
                if (comparable(x, y)) {
                    todo.reset(y);
                    stack.push_back(y);
                }
        }
        return todo.none();
    }

    // Open sets are exactly the down-sets of the specialization preorder.
    // Points with equal minimal opens form cycles and enter together, so the
    // walk runs over those classes in a linear extension (by minopen size):
    // a class may join only once everything strictly below it is in.
    void enumerate_down_sets(std::vector<PointSet>& acc) const {
        const std::size_t n = size();
        std::vector<PointSet> classes;
        std::vector<bool> seen(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (seen[i]) continue;
            PointSet cls(n);
            for (std::size_t j = 0; j < n; ++j)
                if (impl_->minopen[j] == impl_->minopen[i]) {
                    cls.set(j);
                    seen[j] = true;
                }
            classes.push_back(cls);
        }
        std::sort(classes.begin(), classes.end(), [&](const PointSet& a, const PointSet& b) {
            auto ca = impl_->minopen[a.find_first()].count();
            auto cb = impl_->minopen[b.find_first()].count();
            if (ca != cb) return ca < cb;
            return a < b;
        });
        PointSet cur(n);
        walk_down_sets(classes, 0, cur, acc);
    }

    void walk_down_sets(const std::vector<PointSet>& classes, std::size_t idx, PointSet& cur,
                        std::vector<PointSet>& acc) const {
        if (idx == classes.size()) {
            acc.push_back(cur);
            return;
        }
        const PointSet& cls = classes[idx];
        walk_down_sets(classes, idx + 1, cur, acc);
        if ((impl_->minopen[cls.find_first()] - cls).is_subset_of(cur)) {
            cur |= cls;
            walk_down_sets(classes, idx + 1, cur, acc);
            cur -= cls;
        }
    }

    std::shared_ptr<Impl> impl_;
};

template <>
inline std::optional<bool> FinSpace::cache_get<bool>(const std::string& key) const {
    std::lock_guard<std::mutex> lock(impl_->cache_mutex);
    auto it = impl_->flag_cache.find(key);
    if (it == impl_->flag_cache.end()) return std::nullopt;
    return it->second;
}

template <>
inline void FinSpace::cache_put<bool>(const std::string& key, const bool& value) const {
    std::lock_guard<std::mutex> lock(impl_->cache_mutex);
    impl_->flag_cache.emplace(key, value);
}

template <>
inline std::optional<std::string> FinSpace::cache_get<std::string>(const std::string& key) const {
    std::lock_guard<std::mutex> lock(impl_->cache_mutex);
    auto it = impl_->blob_cache.find(key);
    if (it == impl_->blob_cache.end()) return std::nullopt;
    return it->second;
}

template <>
inline void FinSpace::cache_put<std::string>(const std::string& key,
                                             const std::string& value) const {
    std::lock_guard<std::mutex> lock(impl_->cache_mutex);
    impl_->blob_cache.emplace(key, value);
}

/// Product space: points (a,b), minopen((a,b)) = minopen(a) x minopen(b).
/// Fixture builder; the morphism category itself lacks general products.
inline FinSpace product(const FinSpace& a, const FinSpace& b) {
    std::vector<PointId> names;
    std::vector<PointSet> minopen;
    const std::size_t n = a.size() * b.size();
    names.reserve(n);
    minopen.reserve(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            names.push_back("(" + a.name(i) + "," + b.name(j) + ")");
            PointSet m(n);
            for (auto p : mask_members(a.minopen(i)))
                for (auto q : mask_members(b.minopen(j))) m.set(p * b.size() + q);
            minopen.push_back(std::move(m));
        }
    }
    return FinSpace::make_indexed(std::move(names), std::move(minopen));
}

}  // namespace fintop
