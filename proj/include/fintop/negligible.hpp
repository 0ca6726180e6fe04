#pragma once

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fintop/space.hpp"

namespace fintop {

/**
 * A subset element: an open set U together with a subset I of U.  The unit
 * on which smallness of ramification loci is measured.  Closed elements have
 * I closed relative to U.
 */
struct SubsetElement {
    PointSet open_set;  // U
    PointSet inner;     // I

    bool operator==(const SubsetElement& o) const {
        return open_set == o.open_set && inner == o.inner;
    }
};

inline SubsetElement make_element(const FinSpace& space, const PointSet& u, const PointSet& i) {
    space.require_subset(u);
    space.require_subset(i);
    if (!space.is_open(u)) fail(ErrorKind::MalformedElement, "element carrier is not open");
    if (!i.is_subset_of(u)) fail(ErrorKind::MalformedElement, "inner set is not contained in carrier");
    return SubsetElement{u, i};
}

inline bool element_closed(const FinSpace& space, const SubsetElement& e) {
    // closed relative to U: cl(I) & U == I
    return (space.closure(e.inner) & e.open_set) == e.inner;
}

struct ZdenseResult {
    bool holds = false;
    std::optional<PointSet> counterexample;  // offending connected open C
};

/**
 * Z-density of an open set U: every non-empty connected open C must meet U
 * in a non-empty connected set.  Decided by exhausting the connected opens
 * of the space (cached per space); on failure the first offending C in
 * canonical order is returned.
 */
inline ZdenseResult is_zdense(const FinSpace& space, const PointSet& u) {
    space.require_subset(u);
    if (!space.is_open(u)) fail(ErrorKind::NotOpen, "Z-density is defined for open sets");
    const std::string key = "zd:" + mask_key(u);
    if (auto hit = space.cache_get<bool>(key)) {
        if (*hit) return {true, std::nullopt};
        // cached negative: recompute the witness (cheap relative to first scan)
    }
    for (const auto& c : space.connected_opens()) {
        PointSet meet = c & u;
        if (meet.none() || !space.is_connected(meet)) {
            space.cache_put<bool>(key, false);
            return {false, c};
        }
    }
    space.cache_put<bool>(key, true);
    return {true, std::nullopt};
}

/**
 * Negligibility of a subset element: I closed in U and U-I Z-dense in the
 * subspace on U.  (Local connectedness of U is automatic on finite spaces.)
 */
inline bool is_negligible_element(const FinSpace& space, const SubsetElement& e) {
    space.require_subset(e.open_set);
    space.require_subset(e.inner);
    if (!space.is_open(e.open_set) || !e.inner.is_subset_of(e.open_set))
        fail(ErrorKind::MalformedElement, "not a valid subset element");
    const std::string key = "neg:" + mask_key(e.open_set) + "|" + mask_key(e.inner);
    if (auto hit = space.cache_get<bool>(key)) return *hit;

    bool result = false;
    if (element_closed(space, e)) {
        FinSpace sub = space.subspace(e.open_set);
        // rebuild the masks inside the subspace indexing
        auto members = mask_members(e.open_set);
        PointSet rel(sub.size());
        for (std::size_t j = 0; j < members.size(); ++j)
            if (e.inner.test(members[j])) rel.set(j);
        result = is_zdense(sub, ~rel & sub.full_set()).holds;
    }
    space.cache_put<bool>(key, result);
    return result;
}

/// Negligibility of a closed subset of the whole space.
inline bool is_negligible_subset(const FinSpace& space, const PointSet& i) {
    return is_negligible_element(space, SubsetElement{space.full_set(), i});
}

struct LocalCheckResult {
    bool holds = false;        // the neighborhood-basis criterion
    bool definitional = false; // the Z-dense-complement definition
    bool agreement = false;
    std::optional<std::size_t> witness;  // point of I where the basis test fails
};

/**
 * Local criterion for negligibility of a closed set I: every x in I must
 * have a neighborhood basis whose members V keep both V and V-I connected
 * and non-empty.  On a finite space the minimal open set of x is such a
 * basis, and is contained in every neighborhood, so checking it decides the
 * criterion exactly.  The result also reports agreement with the
 * definitional Z-dense-complement route.
 */
inline LocalCheckResult negligible_local_check(const FinSpace& space, const PointSet& i) {
    space.require_subset(i);
    if (!space.is_closed(i)) fail(ErrorKind::NotClosed, "local criterion requires a closed subset");
    LocalCheckResult out;
    out.holds = true;
    for (auto x : mask_members(i)) {
        const PointSet& v = space.minopen(x);
        PointSet rest = v - i;
        if (rest.none() || !space.is_connected(v) || !space.is_connected(rest)) {
            out.holds = false;
            out.witness = x;
            break;
        }
    }
    out.definitional = is_negligible_subset(space, i);
    out.agreement = (out.holds == out.definitional);
    return out;
}

/// Element order: (U,I) <= (V,J) iff U subset of V and U-I subset of V-J.
inline bool element_leq(const FinSpace& space, const SubsetElement& a, const SubsetElement& b) {
    space.require_subset(a.open_set);
    space.require_subset(b.open_set);
    return a.open_set.is_subset_of(b.open_set) &&
           (a.open_set - a.inner).is_subset_of(b.open_set - b.inner);
}

/**
 * Every negligible closed element of the space, canonically ordered by
 * (carrier, inner set).  Cached inside the space's representation; the
 * enumeration walks each open U and each closed subset of the subspace on
 * U, rejecting candidates through the cheap local criterion first and
 * confirming survivors against the Z-density definition.
 */
inline std::vector<SubsetElement> negligible_elements(const FinSpace& space) {
    static const std::string kKey = "negligible-elements";
    auto unpack = [](const std::vector<std::pair<PointSet, PointSet>>& pairs) {
        std::vector<SubsetElement> out;
        out.reserve(pairs.size());
        for (const auto& [u, i] : pairs) out.push_back(SubsetElement{u, i});
        return out;
    };
    if (const auto* hit = space.cached_pair_list(kKey)) return unpack(*hit);

    std::vector<std::pair<PointSet, PointSet>> acc;
    for (const auto& u : space.opens()) {
        FinSpace sub = space.subspace(u);
        auto members = mask_members(u);
        for (const auto& rel_open : sub.opens()) {
            // closed subsets of the subspace are complements of its opens
            PointSet rel_closed = ~rel_open & sub.full_set();
            // local prefilter inside the subspace: every point of the inner
            // set needs its minimal open punctured-connected
            bool plausible = true;
            for (auto j = rel_closed.find_first(); j != PointSet::npos;
                 j = rel_closed.find_next(j)) {
                PointSet rest = sub.minopen(j) - rel_closed;
                if (rest.none() || !sub.is_connected(rest)) {
                    plausible = false;
                    break;
                }
            }
            if (!plausible) continue;
            PointSet inner(space.size());
            for (std::size_t j = 0; j < members.size(); ++j)
                if (rel_closed.test(j)) inner.set(members[j]);
            SubsetElement e{u, inner};
            if (is_negligible_element(space, e)) acc.emplace_back(e.open_set, e.inner);
        }
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return mask_less(a.first, b.first);
        return mask_less(a.second, b.second);
    });
    return unpack(space.store_pair_list(kKey, std::move(acc)));
}

/**
 * Minimal-carrier generating family for diffuseness tests: the negligible
 * elements whose carrier is a minimal open set, with non-empty inner part.
 * Any negligible (U,I) is glued from its traces (minopen(x), minopen(x) & I)
 * for x in I by the locality rule, and those traces are negligible
 * restrictions, so a map pulling back every generator negligibly pulls back
 * every negligible element negligibly.  Keeps codomains with huge open-set
 * lattices tractable.
 */
inline std::vector<SubsetElement> negligible_generators(const FinSpace& space) {
    static const std::string kKey = "negligible-generators";
    auto unpack = [](const std::vector<std::pair<PointSet, PointSet>>& pairs) {
        std::vector<SubsetElement> out;
        out.reserve(pairs.size());
        for (const auto& [u, i] : pairs) out.push_back(SubsetElement{u, i});
        return out;
    };
    if (const auto* hit = space.cached_pair_list(kKey)) return unpack(*hit);

    std::vector<std::pair<PointSet, PointSet>> acc;
    std::unordered_set<std::string> seen_carriers;
    for (std::size_t x = 0; x < space.size(); ++x) {
        const PointSet& u = space.minopen(x);
        if (!seen_carriers.insert(mask_key(u)).second) continue;
        FinSpace sub = space.subspace(u);
        auto members = mask_members(u);
        for (const auto& rel_open : sub.opens()) {
            PointSet rel_closed = ~rel_open & sub.full_set();
            if (rel_closed.none()) continue;
            PointSet inner(space.size());
            for (std::size_t j = 0; j < members.size(); ++j)
                if (rel_closed.test(j)) inner.set(members[j]);
            SubsetElement e{u, inner};
            if (is_negligible_element(space, e)) acc.emplace_back(e.open_set, e.inner);
        }
    }
    std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return mask_less(a.first, b.first);
        return mask_less(a.second, b.second);
    });
    return unpack(space.store_pair_list(kKey, std::move(acc)));
}

/**
 * A family of closed elements together with its closure under the four
 * family rules:
 *   (a) every (U, empty) belongs;
 *   (b) members restrict to open subsets of their carrier;
 *   (c) a member (U,I) absorbs a member (U-I, J) into (U, I|J);
 *   (d) membership is local: if every x in I has an open neighborhood V
 *       inside U with (V, V&I) in the family, then (U,I) joins.
 * The closed hull is the least fixpoint containing the base.
 */
struct ClosedElementFamily {
    FinSpace space;
    std::vector<SubsetElement> base;
    std::vector<SubsetElement> closed_hull;

    bool contains(const SubsetElement& e) const {
        for (const auto& h : closed_hull)
            if (h == e) return true;
        return false;
    }
};

namespace detail {

struct ElementKey {
    std::string k;
    bool operator==(const ElementKey& o) const { return k == o.k; }
};
struct ElementKeyHash {
    std::size_t operator()(const ElementKey& e) const { return std::hash<std::string>()(e.k); }
};

inline ElementKey element_key(const SubsetElement& e) {
    return ElementKey{mask_key(e.open_set) + "|" + mask_key(e.inner)};
}

}  // namespace detail

constexpr std::size_t kDefaultFamilyBudget = 2'000'000;

inline ClosedElementFamily close_family(const FinSpace& space,
                                        const std::vector<SubsetElement>& base,
                                        std::size_t budget = kDefaultFamilyBudget) {
    using detail::element_key;
    using detail::ElementKey;
    using detail::ElementKeyHash;

    for (const auto& e : base) {
        if (!space.is_open(e.open_set) || !e.inner.is_subset_of(e.open_set) ||
            !element_closed(space, e))
            fail(ErrorKind::MalformedElement, "family base must consist of closed elements");
    }

    const auto& opens = space.opens();
    std::unordered_set<ElementKey, ElementKeyHash> seen;
    std::vector<SubsetElement> hull;
    auto add = [&](const SubsetElement& e) {
        if (seen.insert(element_key(e)).second) {
            hull.push_back(e);
            if (hull.size() > budget)
                fail(ErrorKind::BudgetExceeded, "family closure exceeds element budget");
            return true;
        }
        return false;
    };

    for (const auto& u : opens) add(SubsetElement{u, PointSet(space.size())});  // rule (a)
    for (const auto& e : base) add(e);

    // candidate pool for rule (d): all closed elements per carrier, built
    // lazily and only once per carrier; the pool total shares the budget
    std::unordered_map<std::string, std::vector<SubsetElement>> cse_by_carrier;
    std::size_t pool_total = 0;
    auto closed_elements_of = [&](const PointSet& u) -> const std::vector<SubsetElement>& {
        auto key = mask_key(u);
        auto it = cse_by_carrier.find(key);
        if (it != cse_by_carrier.end()) return it->second;
        std::vector<SubsetElement> acc;
        FinSpace sub = space.subspace(u);
        auto members = mask_members(u);
        for (const auto& rel_open : sub.opens()) {
            PointSet rel_closed = ~rel_open & sub.full_set();
            PointSet inner(space.size());
            for (std::size_t j = 0; j < members.size(); ++j)
                if (rel_closed.test(j)) inner.set(members[j]);
            acc.push_back(SubsetElement{u, inner});
            if (++pool_total > budget)
                fail(ErrorKind::BudgetExceeded, "family closure candidate pool exceeds budget");
        }
        return cse_by_carrier.emplace(std::move(key), std::move(acc)).first->second;
    };

    bool changed = true;
    while (changed) {
        changed = false;

        // rule (b): restrictions to open subsets of the carrier
        std::vector<SubsetElement> snapshot = hull;
        for (const auto& e : snapshot) {
            if (e.inner.none()) continue;  // restrictions of (U, empty) are rule (a) members
            for (const auto& v : opens) {
                if (!v.is_subset_of(e.open_set) || v == e.open_set) continue;
                if (add(SubsetElement{v, v & e.inner})) changed = true;
            }
        }

        // rule (c): (U,I) + (U-I, J) => (U, I|J)
        std::unordered_map<std::string, std::vector<const SubsetElement*>> by_carrier;
        for (const auto& e : hull) by_carrier[mask_key(e.open_set)].push_back(&e);
        snapshot = hull;
        for (const auto& e : snapshot) {
            PointSet rest = e.open_set - e.inner;
            auto it = by_carrier.find(mask_key(rest));
            if (it == by_carrier.end()) continue;
            for (const auto* f : it->second) {
                if (f->inner.none()) continue;
                if (add(SubsetElement{e.open_set, e.inner | f->inner})) changed = true;
            }
        }

        // rule (d): glue from minimal-open neighborhoods.  If (V, V&I) lies
        // in the family for some open V around x, restriction (b) puts the
        // minimal open of x there too, so testing minimal opens is complete.
        for (const auto& u : opens) {
            if (u.none()) continue;
            for (const auto& cand : closed_elements_of(u)) {
                if (cand.inner.none() || seen.count(element_key(cand))) continue;
                bool all_local = true;
                for (auto x : mask_members(cand.inner)) {
                    SubsetElement local{space.minopen(x), space.minopen(x) & cand.inner};
                    if (!seen.count(element_key(local))) {
                        all_local = false;
                        break;
                    }
                }
                if (all_local && add(cand)) changed = true;
            }
        }
    }

    std::sort(hull.begin(), hull.end(), [](const SubsetElement& a, const SubsetElement& b) {
        if (a.open_set != b.open_set) return mask_less(a.open_set, b.open_set);
        return mask_less(a.inner, b.inner);
    });
    return ClosedElementFamily{space, base, std::move(hull)};
}

}  // namespace fintop
