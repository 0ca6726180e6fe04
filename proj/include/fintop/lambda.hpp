#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fintop/catalog.hpp"
#include "fintop/diffuse.hpp"
#include "fintop/negligible.hpp"

namespace fintop {

/// A base space together with a family of closed elements and its hull; the
/// data the negligible-pullback functor is built from.
struct NegInstance {
    FinSpace space;
    ClosedElementFamily family;
};

inline NegInstance make_instance(const FinSpace& space, const std::vector<SubsetElement>& base,
                                 std::size_t family_budget = kDefaultFamilyBudget) {
    return NegInstance{space, close_family(space, base, family_budget)};
}

/**
 * The set of continuous maps probe -> X pulling every base element back to a
 * negligible element; the functor's value on the probe, in canonical order.
 */
inline std::vector<ContinuousMap> neg_functor_values(const NegInstance& inst, const FinSpace& probe,
                                                     std::uint64_t budget = kDefaultEnumerationBudget) {
    std::vector<ContinuousMap> out;
    for (const auto& m : enumerate_continuous_maps(probe, inst.space, budget)) {
        bool good = true;
        for (const auto& e : inst.family.base) {
            SubsetElement back{m.preimage(e.open_set), m.preimage(e.inner)};
            if (!is_negligible_element(probe, back)) {
                good = false;
                break;
            }
        }
        if (good) out.push_back(m);
    }
    return out;
}

/**
 * The representing object: points are pairs (x, selector) where the selector
 * picks, for each hull element (U,I) with x in U, a connected component of
 * U-I whose closure contains x, monotonically in the element order.  The
 * topology is generated by the sets N(U, x, f) of selector-compatible points
 * over U; minimal opens are recovered from that basis afterwards.
 */
struct LambdaSpace {
    NegInstance instance;
    FinSpace total;                     // the constructed space
    ContinuousMap projection;           // onto the base space
    // per point: hull-element index -> chosen component (base-space mask)
    std::vector<std::map<std::size_t, PointSet>> selectors;
    std::vector<std::size_t> base_point;  // lambda at the point level
    std::vector<SubsetElement> image_family;  // pullbacks of the hull along the projection

    /// N(U, p): the basis set of points over U selecting like p on every
    /// element carried by U.  Returned as a mask over lambda points.
    PointSet basis_set(const PointSet& carrier, std::size_t p) const;
};

constexpr std::size_t kDefaultSelectorBudget = 4096;

namespace detail {

struct LambdaBuilder {
    const NegInstance& inst;
    std::size_t selector_budget;

    std::vector<std::size_t> base_point;
    std::vector<std::map<std::size_t, PointSet>> selectors;

    explicit LambdaBuilder(const NegInstance& i, std::size_t budget)
        : inst(i), selector_budget(budget) {}

    void enumerate_points() {
        const FinSpace& x_space = inst.space;
        const auto& hull = inst.family.closed_hull;
        for (std::size_t x = 0; x < x_space.size(); ++x) {
            std::vector<std::size_t> carried;  // hull elements with x in U
            for (std::size_t e = 0; e < hull.size(); ++e)
                if (hull[e].open_set.test(x)) carried.push_back(e);

            // candidate components per carried element
            std::vector<std::vector<PointSet>> cands(carried.size());
            bool feasible = true;
            std::size_t branch_product = 1;
            std::vector<std::size_t> branching;
            for (std::size_t t = 0; t < carried.size(); ++t) {
                const auto& el = hull[carried[t]];
                PointSet rest = el.open_set - el.inner;
                for (const auto& comp : x_space.components(rest))
                    if (x_space.closure(comp).test(x)) cands[t].push_back(comp);
                if (cands[t].empty()) {
                    feasible = false;
                    break;
                }
                if (cands[t].size() > 1) {
                    branching.push_back(t);
                    if (branch_product > selector_budget / cands[t].size())
                        fail(ErrorKind::BudgetExceeded,
                             "selector enumeration exceeds the per-point budget");
                    branch_product *= cands[t].size();
                }
            }
            if (!feasible) continue;

            // element order restricted to the carried list
            std::vector<std::pair<std::size_t, std::size_t>> leq_pairs;
            for (std::size_t a = 0; a < carried.size(); ++a)
                for (std::size_t b = 0; b < carried.size(); ++b)
                    if (a != b && element_leq(x_space, hull[carried[a]], hull[carried[b]]))
                        leq_pairs.emplace_back(a, b);

            std::vector<std::size_t> pick(carried.size(), 0);
            std::vector<std::size_t> branch_at(branching.size(), 0);
            while (true) {
                for (std::size_t i = 0; i < branching.size(); ++i)
                    pick[branching[i]] = branch_at[i];
                bool monotone = true;
                for (const auto& [a, b] : leq_pairs)
                    if (!cands[a][pick[a]].is_subset_of(cands[b][pick[b]])) {
                        monotone = false;
                        break;
                    }
                if (monotone) {
                    std::map<std::size_t, PointSet> sel;
                    for (std::size_t t = 0; t < carried.size(); ++t)
                        sel.emplace(carried[t], cands[t][pick[t]]);
                    base_point.push_back(x);
                    selectors.push_back(std::move(sel));
                }
                // advance the branching odometer
                std::size_t i = branching.size();
                bool done = branching.empty();
                while (i > 0) {
                    --i;
                    if (++branch_at[i] < cands[branching[i]].size()) break;
                    branch_at[i] = 0;
                    if (i == 0) done = true;
                }
                if (done) break;
            }
        }
    }
};

}  // namespace detail

inline PointSet LambdaSpace::basis_set(const PointSet& carrier, std::size_t p) const {
    PointSet out(total.size());
    const auto& hull = instance.family.closed_hull;
    std::vector<std::size_t> over;  // elements carried by exactly this open set
    for (std::size_t e = 0; e < hull.size(); ++e)
        if (hull[e].open_set == carrier) over.push_back(e);
    for (std::size_t q = 0; q < total.size(); ++q) {
        if (!carrier.test(base_point[q])) continue;
        bool same = true;
        for (auto e : over) {
            if (selectors[p].at(e) != selectors[q].at(e)) {
                same = false;
                break;
            }
        }
        if (same) out.set(q);
    }
    return out;
}

inline LambdaSpace lambda_construct(const NegInstance& inst,
                                    std::size_t selector_budget = kDefaultSelectorBudget) {
    detail::LambdaBuilder builder(inst, selector_budget);
    builder.enumerate_points();
    const std::size_t n = builder.base_point.size();
    const FinSpace& x_space = inst.space;

    // names: base name, disambiguated when several selectors sit over a point
    std::vector<std::size_t> multiplicity(x_space.size(), 0);
    for (auto x : builder.base_point) ++multiplicity[x];
    std::vector<std::size_t> running(x_space.size(), 0);
    std::vector<PointId> names(n);
    for (std::size_t p = 0; p < n; ++p) {
        std::size_t x = builder.base_point[p];
        names[p] = multiplicity[x] == 1
                       ? x_space.name(x)
                       : x_space.name(x) + "#" + std::to_string(running[x]);
        ++running[x];
    }

    // collect every basis set, then minimal opens as intersections
    LambdaSpace out{inst, FinSpace(), ContinuousMap::identity(FinSpace()), builder.selectors,
                    builder.base_point, {}};
    std::vector<PointSet> minopen(n);
    for (std::size_t p = 0; p < n; ++p) minopen[p] = PointSet(n).set();  // start full
    if (n == 0) {
        out.total = FinSpace::make_indexed({}, {});
        out.projection = ContinuousMap::make(out.total, x_space, {});
        return out;
    }
    // temporary discrete shell so basis sets can be evaluated before the
    // real topology exists; basis_set only uses sizes and selectors
    {
        std::vector<PointSet> shell(n, PointSet(n));
        for (std::size_t p = 0; p < n; ++p) shell[p].set(p);
        out.total = FinSpace::make_indexed(names, std::move(shell));
    }
    for (const auto& u : x_space.opens()) {
        if (u.none()) continue;
        std::vector<char> done(n, 0);
        for (std::size_t p = 0; p < n; ++p) {
            if (done[p] || !u.test(builder.base_point[p])) continue;
            PointSet nset = out.basis_set(u, p);
            for (auto q : mask_members(nset)) {
                done[q] = 1;
                minopen[q] &= nset;
            }
        }
    }
    out.total = FinSpace::make_indexed(names, std::move(minopen));
    std::vector<std::size_t> lam(n);
    for (std::size_t p = 0; p < n; ++p) lam[p] = builder.base_point[p];
    out.projection = ContinuousMap::make(out.total, x_space, std::move(lam));

    for (const auto& e : inst.family.closed_hull) {
        SubsetElement back{out.projection.preimage(e.open_set), out.projection.preimage(e.inner)};
        bool dup = false;
        for (const auto& have : out.image_family)
            if (have == back) {
                dup = true;
                break;
            }
        if (!dup) out.image_family.push_back(back);
    }
    return out;
}

struct ProbeBijection {
    std::size_t probe_size = 0;
    std::size_t upstairs = 0;    // maps into the constructed space
    std::size_t downstairs = 0;  // functor values on the base space
    bool injective = false;
    bool surjective = false;
};

struct RepresentabilityReport {
    std::vector<ProbeBijection> probes;
    bool holds = true;
    // the construction composes with the projection; the transformation is
    // checked as a bijection in that direction
    std::string direction_note =
        "checked direction: post-composition with the projection, verified bijective";
};

/**
 * Representability check by enumeration: for every probe up to the bound,
 * post-composition with the projection must biject the maps into the
 * constructed space that pull its element family back negligibly onto the
 * functor values on the base space.
 */
inline RepresentabilityReport verify_representability(const LambdaSpace& ls, std::size_t probe_bound,
                                                      std::uint64_t budget = kDefaultEnumerationBudget) {
    RepresentabilityReport rep;
    for (const auto& probe : probes_up_to(probe_bound)) {
        ProbeBijection pb;
        pb.probe_size = probe.size();
        std::vector<ContinuousMap> ups;
        for (const auto& m : enumerate_continuous_maps(probe, ls.total, budget)) {
            bool good = true;
            for (const auto& e : ls.image_family) {
                SubsetElement back{m.preimage(e.open_set), m.preimage(e.inner)};
                if (!is_negligible_element(probe, back)) {
                    good = false;
                    break;
                }
            }
            if (good) ups.push_back(m);
        }
        auto downs = neg_functor_values(ls.instance, probe, budget);
        pb.upstairs = ups.size();
        pb.downstairs = downs.size();

        std::vector<ContinuousMap> composites;
        composites.reserve(ups.size());
        for (const auto& m : ups) composites.push_back(ls.projection.compose(m));
        pb.injective = true;
        for (std::size_t a = 0; a < composites.size() && pb.injective; ++a)
            for (std::size_t b = a + 1; b < composites.size(); ++b)
                if (composites[a] == composites[b]) {
                    pb.injective = false;
                    break;
                }
        pb.surjective = true;
        for (const auto& d : downs) {
            bool found = false;
            for (const auto& c : composites)
                if (c == d) {
                    found = true;
                    break;
                }
            if (!found) {
                pb.surjective = false;
                break;
            }
        }
        // composites must also land inside the functor values
        for (const auto& c : composites) {
            bool found = false;
            for (const auto& d : downs)
                if (c == d) {
                    found = true;
                    break;
                }
            if (!found) pb.surjective = false;
        }
        if (!pb.injective || !pb.surjective || pb.upstairs != pb.downstairs) rep.holds = false;
        rep.probes.push_back(pb);
    }
    return rep;
}

enum class HausdorffVerdict { NotApplicable, Preserved, Violated };

/// Separation transfer: when the base space is Hausdorff (discrete, being
/// finite), the constructed space must be Hausdorff too.
inline HausdorffVerdict hausdorff_preserved(const LambdaSpace& ls) {
    auto discrete = [](const FinSpace& s) {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.minopen(i).count() != 1) return false;
        return true;
    };
    if (!discrete(ls.instance.space)) return HausdorffVerdict::NotApplicable;
    return discrete(ls.total) ? HausdorffVerdict::Preserved : HausdorffVerdict::Violated;
}

/// Set-level pullback of c and b with the projections, before any repair.
struct GeneralPullback {
    FinSpace set_pullback;     // subspace of the product
    ContinuousMap to_c, to_b;  // projections from the set-level pullback
    PointSet ramification;     // preimage of the excluded set, inside the pullback
    LambdaSpace repaired;      // the representing object over the pullback
    ContinuousMap leg_c, leg_b;  // projections composed with the repair
};

/**
 * Pullback along a map that is an open local homeomorphism away from a
 * negligible set I: form the set-level pullback X with its projections, mark
 * K as the pullback of I, seed the element family with every negligible
 * element of X-K together with (X,K), and build the representing object.
 * The result, with the composed projections, is the pullback for diffuse
 * maps.
 */
inline GeneralPullback pullback_via_lambda(const ContinuousMap& c, const ContinuousMap& b,
                                           const PointSet& excluded,
                                           std::size_t family_budget = kDefaultFamilyBudget,
                                           std::size_t selector_budget = kDefaultSelectorBudget) {
    if (c.cod() != b.cod()) fail(ErrorKind::SpaceMismatch, "pullback legs must share a codomain");
    b.dom().require_subset(excluded);
    if (!is_negligible_subset(b.dom(), excluded))
        fail(ErrorKind::MalformedElement, "excluded set must be negligible in the map domain");
    // off the excluded set the map must restrict to an open local homeomorphism
    PointSet off = ~excluded & b.dom().full_set();
    FinSpace off_sub = b.dom().subspace(off);
    auto off_members = mask_members(off);
    ContinuousMap b_off = b.restrict(off);
    for (std::size_t t = 0; t < off_sub.size(); ++t) {
        if (!is_open_embedding(b_off.restrict(off_sub.minopen(t))))
            fail(ErrorKind::NotLocalHomeo,
                 "map is not an open local homeomorphism at '" + off_sub.name(t) +
                     "' away from the excluded set");
    }

    FinSpace prod = product(c.dom(), b.dom());
    PointSet mask(prod.size());
    for (std::size_t y = 0; y < c.dom().size(); ++y)
        for (std::size_t z = 0; z < b.dom().size(); ++z)
            if (c(y) == b(z)) mask.set(y * b.dom().size() + z);
    FinSpace x = prod.subspace(mask);
    std::vector<std::size_t> pc, pb_;
    for (auto cell : mask_members(mask)) {
        pc.push_back(cell / b.dom().size());
        pb_.push_back(cell % b.dom().size());
    }
    ContinuousMap to_c = ContinuousMap::make(x, c.dom(), std::move(pc));
    ContinuousMap to_b = ContinuousMap::make(x, b.dom(), std::move(pb_));
    PointSet k = to_b.preimage(excluded);

    // element family: all negligible elements of X-K, then (X,K)
    std::vector<SubsetElement> base;
    PointSet offk = ~k & x.full_set();
    FinSpace xoff = x.subspace(offk);
    auto xoff_members = mask_members(offk);
    for (const auto& e : negligible_elements(xoff)) {
        PointSet u(x.size()), inner(x.size());
        for (auto j : mask_members(e.open_set)) u.set(xoff_members[j]);
        for (auto j : mask_members(e.inner)) inner.set(xoff_members[j]);
        base.push_back(SubsetElement{u, inner});
    }
    base.push_back(SubsetElement{x.full_set(), k});

    NegInstance inst = make_instance(x, base, family_budget);
    LambdaSpace ls = lambda_construct(inst, selector_budget);
    ContinuousMap leg_c = to_c.compose(ls.projection);
    ContinuousMap leg_b = to_b.compose(ls.projection);
    (void)off_members;
    return GeneralPullback{x, to_c, to_b, k, std::move(ls), std::move(leg_c), std::move(leg_b)};
}

struct PullbackUniversality {
    bool holds = true;
    std::size_t probes_checked = 0;
    std::uint64_t pairs_checked = 0;
    std::string detail;
};

/// Universal property of the repaired pullback against probes: every
/// compatible pair of diffuse maps into the two corners factors uniquely
/// through the representing object.
inline PullbackUniversality verify_general_pullback(const GeneralPullback& gp,
                                                    const ContinuousMap& c, const ContinuousMap& b,
                                                    std::size_t probe_bound,
                                                    std::uint64_t budget = kDefaultEnumerationBudget) {
    PullbackUniversality out;
    for (const auto& probe : probes_up_to(probe_bound)) {
        ++out.probes_checked;
        auto into_c = enumerate_continuous_maps(probe, c.dom(), budget);
        auto into_b = enumerate_continuous_maps(probe, b.dom(), budget);
        auto lifts = enumerate_continuous_maps(probe, gp.repaired.total, budget);
        for (const auto& p : into_c) {
            if (!is_diffuse(p).holds) continue;
            for (const auto& q : into_b) {
                if (c.compose(p) != b.compose(q)) continue;
                if (!is_diffuse(q).holds) continue;
                ++out.pairs_checked;
                std::size_t found = 0;
                for (const auto& h : lifts) {
                    if (gp.leg_c.compose(h) == p && gp.leg_b.compose(h) == q &&
                        is_diffuse(h).holds)
                        ++found;
                }
                if (found != 1) {
                    out.holds = false;
                    out.detail = "a compatible pair admits " + std::to_string(found) +
                                 " diffuse factorizations through the pullback";
                    return out;
                }
            }
        }
    }
    return out;
}

}  // namespace fintop
