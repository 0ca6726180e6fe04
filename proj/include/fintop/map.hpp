#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fintop/space.hpp"

namespace fintop {

/**
 * A validated continuous function between finite spaces.
 *
 * On Alexandrov spaces continuity is equivalent to the minimal-open
 * criterion: f(minopen(x)) must lie inside minopen(f(x)) for every x.  The
 * criterion is checked at construction; use continuity_witness to test a raw
 * assignment without throwing.
 */
class ContinuousMap {
public:
    static ContinuousMap make(FinSpace dom, FinSpace cod, std::vector<std::size_t> values) {
        if (auto w = continuity_witness(dom, cod, values)) {
            fail(ErrorKind::NotContinuous,
                 "not continuous at '" + dom.name(*w) + "': image of its minimal open set "
                 "is not contained in minopen(" + cod.name(values[*w]) + ")");
        }
        return ContinuousMap(std::move(dom), std::move(cod), std::move(values));
    }

    static ContinuousMap make_by_names(const FinSpace& dom, const FinSpace& cod,
                                       const std::map<PointId, PointId>& assignment) {
        std::vector<std::size_t> values(dom.size());
        std::vector<bool> seen(dom.size(), false);
        for (const auto& [p, q] : assignment) {
            auto i = dom.index_of(p);
            values[i] = cod.index_of(q);
            seen[i] = true;
        }
        for (std::size_t i = 0; i < dom.size(); ++i)
            if (!seen[i])
                fail(ErrorKind::UnknownPoint, "assignment is not total: missing '" + dom.name(i) + "'");
        return make(dom, cod, std::move(values));
    }

    /// Continuity failure witness for a raw assignment, or nullopt if
    /// continuous.  The assignment must be total and in range.
    static std::optional<std::size_t> continuity_witness(const FinSpace& dom, const FinSpace& cod,
                                                         const std::vector<std::size_t>& values) {
        if (values.size() != dom.size())
            fail(ErrorKind::UnknownPoint, "assignment is not total on the domain");
        for (auto v : values)
            if (v >= cod.size()) fail(ErrorKind::UnknownPoint, "assignment target out of range");
        for (std::size_t x = 0; x < dom.size(); ++x) {
            const PointSet& target = cod.minopen(values[x]);
            for (auto y : mask_members(dom.minopen(x)))
                if (!target.test(values[y])) return x;
        }
        return std::nullopt;
    }

    static ContinuousMap identity(const FinSpace& s) {
        std::vector<std::size_t> v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) v[i] = i;
        return ContinuousMap(s, s, std::move(v));
    }

    static ContinuousMap constant(const FinSpace& dom, const FinSpace& cod, std::size_t target) {
        return make(dom, cod, std::vector<std::size_t>(dom.size(), target));
    }

    /// Subset injection of an open or arbitrary subset (subspace topology).
    static ContinuousMap inclusion(const FinSpace& ambient, const PointSet& subset) {
        FinSpace sub = ambient.subspace(subset);
        std::vector<std::size_t> v;
        v.reserve(sub.size());
        for (auto i : mask_members(subset)) v.push_back(i);
        return ContinuousMap(sub, ambient, std::move(v));
    }

    const FinSpace& dom() const { return dom_; }
    const FinSpace& cod() const { return cod_; }
    std::size_t operator()(std::size_t x) const { return values_.at(x); }
    const std::vector<std::size_t>& values() const { return values_; }

    PointSet image(const PointSet& s) const {
        dom_.require_subset(s);
        PointSet out(cod_.size());
        for (auto i : mask_members(s)) out.set(values_[i]);
        return out;
    }

    PointSet image_set() const { return image(dom_.full_set()); }

    PointSet preimage(const PointSet& s) const {
        cod_.require_subset(s);
        PointSet out(dom_.size());
        for (std::size_t i = 0; i < dom_.size(); ++i)
            if (s.test(values_[i])) out.set(i);
        return out;
    }

    PointSet fiber(std::size_t y) const {
        PointSet s(cod_.size());
        s.set(y);
        return preimage(s);
    }

    bool injective() const {
        PointSet seen(cod_.size());
        for (auto v : values_) {
            if (seen.test(v)) return false;
            seen.set(v);
        }
        return true;
    }

    bool surjective() const { return image_set().count() == cod_.size(); }

    /// this o g
    ContinuousMap compose(const ContinuousMap& g) const {
        if (g.cod() != dom_) fail(ErrorKind::SpaceMismatch, "composition domains do not match");
        std::vector<std::size_t> v(g.dom().size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[g.values_[i]];
        return ContinuousMap(g.dom(), cod_, std::move(v));
    }

    /// Restriction to the subspace on S (same codomain).
    ContinuousMap restrict(const PointSet& s) const {
        dom_.require_subset(s);
        FinSpace sub = dom_.subspace(s);
        std::vector<std::size_t> v;
        v.reserve(sub.size());
        for (auto i : mask_members(s)) v.push_back(values_[i]);
        return ContinuousMap(sub, cod_, std::move(v));
    }

    /// Corestriction onto the subspace carried by T; requires image inside T.
    ContinuousMap corestrict(const PointSet& t) const {
        cod_.require_subset(t);
        if (!image_set().is_subset_of(t))
            fail(ErrorKind::SpaceMismatch, "image is not contained in the corestriction target");
        FinSpace sub = cod_.subspace(t);
        auto members = mask_members(t);
        std::vector<std::size_t> reindex(cod_.size(), PointSet::npos);
        for (std::size_t j = 0; j < members.size(); ++j) reindex[members[j]] = j;
        std::vector<std::size_t> v(dom_.size());
        for (std::size_t i = 0; i < dom_.size(); ++i) v[i] = reindex[values_[i]];
        return ContinuousMap(dom_, sub, std::move(v));
    }

    bool operator==(const ContinuousMap& o) const {
        return dom_ == o.dom_ && cod_ == o.cod_ && values_ == o.values_;
    }
    bool operator!=(const ContinuousMap& o) const { return !(*this == o); }

    std::string describe() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < dom_.size(); ++i) {
            if (i) os << ", ";
            os << dom_.name(i) << "->" << cod_.name(values_[i]);
        }
        return os.str();
    }

private:
    ContinuousMap(FinSpace dom, FinSpace cod, std::vector<std::size_t> values)
        : dom_(std::move(dom)), cod_(std::move(cod)), values_(std::move(values)) {}

    FinSpace dom_, cod_;
    std::vector<std::size_t> values_;
};

/// Open map test on basis opens; images of unions are unions of images.
inline bool is_open_map(const ContinuousMap& f) {
    for (std::size_t x = 0; x < f.dom().size(); ++x)
        if (!f.cod().is_open(f.image(f.dom().minopen(x)))) return false;
    return true;
}

constexpr std::uint64_t kDefaultEnumerationBudget = 20'000'000;

/// All total functions dom -> cod passing the predicate, in canonical
/// lexicographic order (assignments read as base-|cod| words, first point most
/// significant).  The predicate receives the raw assignment.
inline std::vector<std::vector<std::size_t>> enumerate_assignments(
    const FinSpace& dom, const FinSpace& cod,
    const std::function<bool(const std::vector<std::size_t>&)>& pred,
    std::uint64_t budget = kDefaultEnumerationBudget) {
    const std::size_t n = dom.size(), m = cod.size();
    if (n > 0 && m == 0) return {};
    double total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= static_cast<double>(m);
        if (total > static_cast<double>(budget))
            fail(ErrorKind::BudgetExceeded, "map enumeration exceeds budget");
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(n, 0);
    while (true) {
        if (pred(cur)) out.push_back(cur);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++cur[i] < m) break;
            cur[i] = 0;
            if (i == 0) return out;
        }
        if (n == 0) return out;
    }
}

/// All continuous maps dom -> cod in canonical order.  Backtracking with
/// partial continuity pruning keeps large searches tractable.
inline std::vector<ContinuousMap> enumerate_continuous_maps(
    const FinSpace& dom, const FinSpace& cod, std::uint64_t budget = kDefaultEnumerationBudget) {
    const std::size_t n = dom.size(), m = cod.size();
    std::vector<ContinuousMap> out;
    if (n == 0) {
        out.push_back(ContinuousMap::make(dom, cod, {}));
        return out;
    }
    if (m == 0) return {};
    std::uint64_t visited = 0;
    std::vector<std::size_t> cur(n, 0);
    // prefix continuity: for each assigned x, constraints against assigned
    // members of minopen(x) in both directions
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx == n) {
            out.push_back(ContinuousMap::make(dom, cod, cur));
            return;
        }
        for (std::size_t v = 0; v < m; ++v) {
            if (++visited > budget) fail(ErrorKind::BudgetExceeded, "map enumeration exceeds budget");
            cur[idx] = v;
            bool ok = true;
            for (std::size_t x = 0; ok && x <= idx; ++x) {
                // check pair (x, idx): idx in minopen(x) or x in minopen(idx)
                if (dom.minopen(x).test(idx) && !cod.minopen(cur[x]).test(v)) ok = false;
                if (ok && dom.minopen(idx).test(x) && !cod.minopen(v).test(cur[x])) ok = false;
            }
            if (ok) rec(idx + 1);
        }
    };
    rec(0);
    return out;
}

/// enumerate_maps per the operations contract: every total function dom ->
/// cod passing the predicate, as raw assignments in canonical order.  The
/// always-true predicate yields exactly |cod|^|dom| entries.
inline std::vector<std::vector<std::size_t>> enumerate_maps(
    const FinSpace& dom, const FinSpace& cod,
    const std::function<bool(const std::vector<std::size_t>&)>& pred,
    std::uint64_t budget = kDefaultEnumerationBudget) {
    return enumerate_assignments(dom, cod, pred, budget);
}

inline std::function<bool(const std::vector<std::size_t>&)> continuity_predicate(
    const FinSpace& dom, const FinSpace& cod) {
    return [dom, cod](const std::vector<std::size_t>& raw) {
        return !ContinuousMap::continuity_witness(dom, cod, raw).has_value();
    };
}

}  // namespace fintop
