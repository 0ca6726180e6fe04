#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintop/diffuse.hpp"
#include "fintop/group_action.hpp"

namespace fintop {

enum class EqualityKind { ComponentWise, PointwiseOnly, Distinct };

inline const char* to_string(EqualityKind k) {
    switch (k) {
        case EqualityKind::ComponentWise: return "component-wise";
        case EqualityKind::PointwiseOnly: return "pointwise-only";
        case EqualityKind::Distinct: return "distinct";
    }
    return "?";
}

/**
 * Verdict on when two maps into a space with a group action represent the
 * same morphism into the quotient.  Component-wise: one group element per
 * connected component of the domain carries f to g — the faithful notion.
 * Pointwise-only: a group element exists at each point but cannot be chosen
 * per component; compositions with the topological quotient agree even
 * though the morphisms differ.  Pathology points are those whose every
 * neighborhood mixes strict agreement with strict twisted agreement.
 */
struct EqualityVerdict {
    EqualityKind kind = EqualityKind::Distinct;
    // component mask -> group element index carrying f to g (component-wise)
    std::vector<std::pair<PointSet, std::size_t>> per_component;
    PointSet pathology_points;
};

/// Component-wise / pointwise classification of g against f through the
/// action on their common codomain.  Both maps must be diffuse into the
/// action space; diffuseness is the caller's contract and is not re-checked
/// here.
inline EqualityVerdict morphisms_equal(const ContinuousMap& f, const ContinuousMap& g,
                                       const GroupAction& action) {
    if (f.dom() != g.dom()) fail(ErrorKind::SpaceMismatch, "maps compare over a common domain");
    if (f.cod() != action.space() || g.cod() != action.space())
        fail(ErrorKind::SpaceMismatch, "maps must land in the action space");
    const FinSpace& dom = f.dom();
    EqualityVerdict out;
    out.pathology_points = PointSet(dom.size());

    bool component_wise = true;
    for (const auto& comp : dom.components(dom.full_set())) {
        std::optional<std::size_t> found;
        for (std::size_t h = 0; h < action.order() && !found; ++h) {
            bool all = true;
            for (auto x : mask_members(comp))
                if (g(x) != action.apply(h, f(x))) {
                    all = false;
                    break;
                }
            if (all) found = h;
        }
        if (found)
            out.per_component.emplace_back(comp, *found);
        else
            component_wise = false;
    }
    if (component_wise) {
        out.kind = EqualityKind::ComponentWise;
        return out;
    }

    bool pointwise = true;
    for (std::size_t x = 0; x < dom.size() && pointwise; ++x) {
        bool any = false;
        for (std::size_t h = 0; h < action.order() && !any; ++h)
            any = (g(x) == action.apply(h, f(x)));
        pointwise = any;
    }
    out.kind = pointwise ? EqualityKind::PointwiseOnly : EqualityKind::Distinct;
    return out;
}

/**
 * Pointwise-vs-component report with pathology detection.  A point is
 * pathological when, for some non-identity element s, its minimal open set
 * (hence every neighborhood) contains both a point v with g(v) = f(v)
 * strictly untwisted (s.f(v) != f(v)) and a point w with g(w) = s.f(w)
 * strictly twisted (s.f(w) != f(w)).  Restrictions of f and g near such a
 * point never agree component-wise.
 */
inline EqualityVerdict pointwise_vs_component_report(const ContinuousMap& f,
                                                     const ContinuousMap& g,
                                                     const GroupAction& action) {
    EqualityVerdict out = morphisms_equal(f, g, action);
    const FinSpace& dom = f.dom();
    for (std::size_t x = 0; x < dom.size(); ++x) {
        bool pathological = false;
        for (std::size_t s = 0; s < action.order() && !pathological; ++s) {
            if (s == action.identity_index()) continue;
            bool has_plain = false, has_twisted = false;
            for (auto v : mask_members(dom.minopen(x))) {
                std::size_t tw = action.apply(s, f(v));
                if (g(v) == f(v) && tw != f(v)) has_plain = true;
                if (g(v) == tw && tw != f(v)) has_twisted = true;
                if (has_plain && has_twisted) break;
            }
            pathological = has_plain && has_twisted;
        }
        if (pathological) out.pathology_points.set(x);
    }
    return out;
}

/**
 * Formal equality of f and g as morphisms into the glued quotient: a
 * continuous map d into the action canopy's overlap (one copy of the space
 * per group element) must satisfy rho1 o d = f and rho2 o d = g.  On the
 * group canopy this means choosing, continuously, one group element per
 * point carrying f to g; it exists exactly when the maps agree
 * component-wise.  Kept as an independent route for cross-checking.
 */
inline bool formally_equal(const ContinuousMap& f, const ContinuousMap& g,
                           const GroupAction& action) {
    if (f.dom() != g.dom()) fail(ErrorKind::SpaceMismatch, "maps compare over a common domain");
    const FinSpace& dom = f.dom();
    const FinSpace& n = action.space();
    // overlap = disjoint union of |H| copies of N; d(x) = (h, f(x)) needs
    // h.f(x) = g(x); search for a continuous selection h(x) by backtracking
    std::vector<std::vector<std::size_t>> candidates(dom.size());
    for (std::size_t x = 0; x < dom.size(); ++x) {
        for (std::size_t h = 0; h < action.order(); ++h)
            if (action.apply(h, f(x)) == g(x)) candidates[x].push_back(h);
        if (candidates[x].empty()) return false;
    }
    // continuity of d: y in minopen(x) requires d(y) in minopen(d(x)), i.e.
    // the same copy (copies are open) and f(y) in minopen(f(x)) (automatic)
    std::vector<std::size_t> choice(dom.size(), PointSet::npos);
    std::function<bool(std::size_t)> rec = [&](std::size_t x) -> bool {
        if (x == dom.size()) return true;
        for (auto h : candidates[x]) {
            bool ok = true;
            for (std::size_t y = 0; y < x && ok; ++y) {
                if (dom.minopen(x).test(y) || dom.minopen(y).test(x))
                    ok = (choice[y] == h);
            }
            // points adjacent in the domain must select the same copy; the
            // copies of the overlap are disjoint opens
            if (ok) {
                choice[x] = h;
                if (rec(x + 1)) return true;
                choice[x] = PointSet::npos;
            }
        }
        return false;
    };
    (void)n;
    return rec(0);
}

/**
 * Representation of a morphism from a space into a group quotient: a cover
 * of the source by local subsets, and one diffuse leg into the action space
 * per cover member.  Legs must agree, component-wise up to the action, on
 * every set-level overlap product.
 */
struct QuotientMorphismRep {
    FinSpace source;
    GroupAction target_action;
    std::vector<ContinuousMap> cover;  // theta(j) : dom_j -> source
    std::vector<ContinuousMap> legs;   // f(j) : dom_j -> action space
};

struct RepresentationCheck {
    bool valid = false;
    std::string reason;
    std::optional<std::pair<std::size_t, std::size_t>> failing_pair;
};

inline RepresentationCheck validate_representation(const QuotientMorphismRep& rep) {
    RepresentationCheck out;
    if (rep.cover.size() != rep.legs.size() || rep.cover.empty()) {
        out.reason = "cover and leg lists must align and be non-empty";
        return out;
    }
    for (std::size_t j = 0; j < rep.cover.size(); ++j) {
        if (rep.cover[j].cod() != rep.source || rep.legs[j].cod() != rep.target_action.space() ||
            rep.cover[j].dom() != rep.legs[j].dom())
            fail(ErrorKind::SpaceMismatch, "representation legs are inconsistent");
    }
    auto cover_check = is_cover(rep.cover, rep.source, CoverMode::Pseudoetale);
    if (!cover_check.holds) {
        out.reason = "not a cover: " + cover_check.reason;
        return out;
    }
    for (std::size_t j = 0; j < rep.legs.size(); ++j) {
        if (!is_diffuse(rep.legs[j]).holds) {
            out.reason = "leg " + std::to_string(j) + " is not diffuse";
            return out;
        }
    }
    for (std::size_t j = 0; j < rep.cover.size(); ++j)
        for (std::size_t k = 0; k < rep.cover.size(); ++k) {
            // set-level overlap product with its two projections
            const FinSpace& dj = rep.cover[j].dom();
            const FinSpace& dk = rep.cover[k].dom();
            FinSpace prod = product(dj, dk);
            PointSet mask(prod.size());
            for (std::size_t u = 0; u < dj.size(); ++u)
                for (std::size_t v = 0; v < dk.size(); ++v)
                    if (rep.cover[j](u) == rep.cover[k](v)) mask.set(u * dk.size() + v);
            if (mask.none()) continue;
            FinSpace pb = prod.subspace(mask);
            std::vector<std::size_t> p1, p2;
            for (auto cell : mask_members(mask)) {
                p1.push_back(cell / dk.size());
                p2.push_back(cell % dk.size());
            }
            auto pi1 = ContinuousMap::make(pb, dj, std::move(p1));
            auto pi2 = ContinuousMap::make(pb, dk, std::move(p2));
            auto verdict = morphisms_equal(rep.legs[j].compose(pi1), rep.legs[k].compose(pi2),
                                           rep.target_action);
            if (verdict.kind != EqualityKind::ComponentWise) {
                out.reason = "legs " + std::to_string(j) + " and " + std::to_string(k) +
                             " disagree beyond the action on their overlap";
                out.failing_pair = {j, k};
                return out;
            }
        }
    out.valid = true;
    return out;
}

}  // namespace fintop
