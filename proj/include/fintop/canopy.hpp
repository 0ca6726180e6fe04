#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintop/diffuse.hpp"
#include "fintop/family.hpp"
#include "fintop/group_action.hpp"

namespace fintop {

/**
 * Gluing datum: charts indexed by a finite set J, an overlap space for every
 * ordered pair (j,k), and two projections from each overlap into its charts.
 * Missing overlaps count as empty.  The induced relation on the disjoint
 * union of the charts must be an equivalence relation; validate_canopy
 * reports which law fails, in the vocabulary of the gluing axioms (diagonal
 * datum ~ reflexivity, symmetry datum ~ symmetry, composition datum ~
 * transitivity).
 */
struct Canopy {
    std::vector<FinSpace> charts;
    // overlaps[j][k] with rho1[j][k] : overlap -> charts[j],
    //                  rho2[j][k] : overlap -> charts[k]
    std::vector<std::vector<FinSpace>> overlaps;
    std::vector<std::vector<ContinuousMap>> rho1;
    std::vector<std::vector<ContinuousMap>> rho2;

    std::size_t chart_count() const { return charts.size(); }
};

inline Canopy make_canopy(std::vector<FinSpace> charts, std::vector<std::vector<FinSpace>> overlaps,
                          std::vector<std::vector<ContinuousMap>> rho1,
                          std::vector<std::vector<ContinuousMap>> rho2) {
    const std::size_t n = charts.size();
    if (n == 0) fail(ErrorKind::EmptyList, "a canopy needs at least one chart");
    auto check_square = [n](const auto& grid, const char* what) {
        if (grid.size() != n) fail(ErrorKind::SpaceMismatch, std::string(what) + " grid not square");
        for (const auto& row : grid)
            if (row.size() != n) fail(ErrorKind::SpaceMismatch, std::string(what) + " grid not square");
    };
    check_square(overlaps, "overlap");
    check_square(rho1, "rho1");
    check_square(rho2, "rho2");
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            if (rho1[j][k].dom() != overlaps[j][k] || rho1[j][k].cod() != charts[j])
                fail(ErrorKind::SpaceMismatch, "rho1 domain/codomain mismatch");
            if (rho2[j][k].dom() != overlaps[j][k] || rho2[j][k].cod() != charts[k])
                fail(ErrorKind::SpaceMismatch, "rho2 domain/codomain mismatch");
        }
    return Canopy{std::move(charts), std::move(overlaps), std::move(rho1), std::move(rho2)};
}

/// Canopy of a cover of a space by open subsets: charts are the subspaces,
/// overlaps their intersections, projections the injections.
inline Canopy canopy_from_open_cover(const FinSpace& space, const std::vector<PointSet>& cover) {
    PointSet covered(space.size());
    for (const auto& u : cover) {
        if (!space.is_open(u)) fail(ErrorKind::NotOpen, "cover members must be open");
        covered |= u;
    }
    if (covered.count() != space.size()) fail(ErrorKind::NotACover, "cover does not exhaust the space");
    const std::size_t n = cover.size();
    std::vector<FinSpace> charts;
    charts.reserve(n);
    for (const auto& u : cover) charts.push_back(space.subspace(u));
    std::vector<std::vector<FinSpace>> overlaps(n, std::vector<FinSpace>(n));
    std::vector<std::vector<ContinuousMap>> rho1, rho2;
    rho1.resize(n);
    rho2.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            PointSet meet = cover[j] & cover[k];
            overlaps[j][k] = space.subspace(meet);
            // injections relative to the charts
            auto into = [&](const PointSet& chart_mask, const FinSpace& chart) {
                auto chart_members = mask_members(chart_mask);
                std::vector<std::size_t> reindex(space.size(), PointSet::npos);
                for (std::size_t t = 0; t < chart_members.size(); ++t)
                    reindex[chart_members[t]] = t;
                std::vector<std::size_t> vals;
                for (auto p : mask_members(meet)) vals.push_back(reindex[p]);
                return ContinuousMap::make(overlaps[j][k], chart, std::move(vals));
            };
            rho1[j].push_back(into(cover[j], charts[j]));
            rho2[j].push_back(into(cover[k], charts[k]));
        }
    return make_canopy(std::move(charts), std::move(overlaps), std::move(rho1), std::move(rho2));
}

/**
 * Canopy of a finite group action: one chart (the space itself), the overlap
 * a disjoint union of one copy of the space per group element, the first
 * projection the fold of identities and the second the fold of the actions.
 * The group laws make the induced relation an equivalence relation.
 */
inline Canopy canopy_from_group_action(const GroupAction& action) {
    const FinSpace& b = action.space();
    std::vector<FinSpace> copies(action.order(), b);
    SpaceFamilyHandle u = disjoint_union(copies);
    std::vector<std::size_t> p1(u.total.size()), p2(u.total.size());
    for (std::size_t g = 0; g < action.order(); ++g) {
        for (std::size_t x = 0; x < b.size(); ++x) {
            std::size_t idx = u.injections[g](x);
            p1[idx] = x;
            p2[idx] = action.apply(g, x);
        }
    }
    ContinuousMap rho1 = ContinuousMap::make(u.total, b, std::move(p1));
    ContinuousMap rho2 = ContinuousMap::make(u.total, b, std::move(p2));
    return make_canopy({b}, {{u.total}}, {{rho1}}, {{rho2}});
}

enum class EquivalenceLaw { Reflexivity, Symmetry, Transitivity };

inline const char* to_string(EquivalenceLaw law) {
    switch (law) {
        case EquivalenceLaw::Reflexivity: return "reflexivity (diagonal datum)";
        case EquivalenceLaw::Symmetry: return "symmetry (symmetry datum)";
        case EquivalenceLaw::Transitivity: return "transitivity (composition datum)";
    }
    return "?";
}

struct AxiomFailure {
    EquivalenceLaw law;
    std::string witness;
};

struct CanopyCheck {
    bool ok = false;
    std::optional<AxiomFailure> failure;
    std::string detail;  // non-fatal notes (projection quality)
};

namespace detail {

struct GluingRelation {
    SpaceFamilyHandle x1;                        // disjoint union of charts
    std::vector<PointSet> related;               // relation matrix over X1
};

inline GluingRelation build_relation(const Canopy& c) {
    GluingRelation out;
    out.x1 = disjoint_union(c.charts);
    const std::size_t n = out.x1.total.size();
    out.related.assign(n, PointSet(n));
    for (std::size_t j = 0; j < c.chart_count(); ++j)
        for (std::size_t k = 0; k < c.chart_count(); ++k) {
            const FinSpace& ov = c.overlaps[j][k];
            for (std::size_t z = 0; z < ov.size(); ++z) {
                std::size_t a = out.x1.injections[j](c.rho1[j][k](z));
                std::size_t b = out.x1.injections[k](c.rho2[j][k](z));
                out.related[a].set(b);
            }
        }
    return out;
}

}  // namespace detail

/// Checks the canopy conditions: continuity is enforced by construction;
/// the projections must be open local subsets, and the induced relation must
/// be an equivalence relation.
inline CanopyCheck validate_canopy(const Canopy& c) {
    CanopyCheck out;
    for (std::size_t j = 0; j < c.chart_count(); ++j)
        for (std::size_t k = 0; k < c.chart_count(); ++k) {
            for (const ContinuousMap* rho : {&c.rho1[j][k], &c.rho2[j][k]}) {
                if (rho->dom().empty()) continue;
                // openness on basis opens suffices: images of unions are
                // unions of images
                bool open_map = true;
                for (std::size_t x = 0; x < rho->dom().size(); ++x)
                    if (!rho->cod().is_open(rho->image(rho->dom().minopen(x)))) {
                        open_map = false;
                        break;
                    }
                if (!open_map) {
                    out.detail = "projection (" + std::to_string(j) + "," + std::to_string(k) +
                                 ") is not an open map";
                    return out;
                }
                if (!is_diffuse(*rho).holds || !is_fdl_local_subset(*rho).holds) {
                    out.detail = "projection (" + std::to_string(j) + "," + std::to_string(k) +
                                 ") is not a local subset";
                    return out;
                }
            }
        }

    auto rel = detail::build_relation(c);
    const std::size_t n = rel.x1.total.size();
    for (std::size_t a = 0; a < n; ++a)
        if (!rel.related[a].test(a)) {
            out.failure = AxiomFailure{EquivalenceLaw::Reflexivity,
                                       rel.x1.total.name(a) + " is not related to itself"};
            return out;
        }
    for (std::size_t a = 0; a < n; ++a)
        for (auto b : mask_members(rel.related[a]))
            if (!rel.related[b].test(a)) {
                out.failure = AxiomFailure{EquivalenceLaw::Symmetry,
                                           rel.x1.total.name(a) + " ~ " + rel.x1.total.name(b) +
                                               " but not conversely"};
                return out;
            }
    for (std::size_t a = 0; a < n; ++a)
        for (auto b : mask_members(rel.related[a]))
            for (auto cpt : mask_members(rel.related[b]))
                if (!rel.related[a].test(cpt)) {
                    out.failure = AxiomFailure{
                        EquivalenceLaw::Transitivity,
                        rel.x1.total.name(a) + " ~ " + rel.x1.total.name(b) + " ~ " +
                            rel.x1.total.name(cpt) + " without " + rel.x1.total.name(a) + " ~ " +
                            rel.x1.total.name(cpt)};
                    return out;
                }
    out.ok = true;
    return out;
}

/**
 * The constructed quotient of a canopy: X1 the disjoint union of the charts,
 * X its quotient by the induced relation, alpha(j) the composite of the
 * injection with the projection.
 */
struct Affinization {
    Canopy canopy;
    SpaceFamilyHandle x1;          // injections beta(j)
    std::vector<PointSet> classes; // relation classes inside X1
    FinSpace total;                // X
    ContinuousMap quotient_map;    // q : X1 -> X
    std::vector<ContinuousMap> alpha;  // alpha(j) = q o beta(j)
};

inline Affinization affinize(const Canopy& c) {
    auto rel = detail::build_relation(c);
    const std::size_t n = rel.x1.total.size();
    std::vector<PointSet> classes;
    PointSet seen(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (seen.test(a)) continue;
        classes.push_back(rel.related[a]);
        seen |= rel.related[a];
    }
    SpaceFamilyHandle q = quotient_space(rel.x1.total, classes);
    Affinization out{c, rel.x1, std::move(classes), q.total, *q.projection, {}};
    for (std::size_t j = 0; j < c.chart_count(); ++j)
        out.alpha.push_back(out.quotient_map.compose(rel.x1.injections[j]));
    return out;
}

struct AffinizationReport {
    bool cover_ok = false;
    bool witness_ok = false;       // alpha-image equality <=> overlap witness
    bool product_ok = false;       // embedding case: overlap is the fibered product
    bool colimit_ok = false;
    bool embedding_legged = false;
    std::size_t probes_checked = 0;
    std::string detail;

    bool all_ok() const { return cover_ok && witness_ok && product_ok && colimit_ok; }
};

/**
 * Checks the affinization conditions by enumeration:
 *  (i)   the alpha legs form a cover of the quotient,
 *  (ii)  alpha(j)(x) = alpha(k)(y) exactly when some overlap point witnesses
 *        the identification,
 *  (iii) for embedding-legged canopies, each overlap is homeomorphic to the
 *        set-level fibered product via its two projections (for general legs
 *        the witness existence of (ii) is the available half),
 *  (iv)  the colimit condition against every probe up to the bound: a
 *        function off the quotient is diffuse continuous exactly when its
 *        composites with all alpha legs are.  Only continuous candidates
 *        need scanning: the legs are open quotient-like surjections, so a
 *        function with continuous composites is itself continuous.
 */
inline AffinizationReport verify_affinization(const Affinization& a, std::size_t probe_bound,
                                              std::uint64_t budget = kDefaultEnumerationBudget) {
    AffinizationReport rep;
    const Canopy& c = a.canopy;

    rep.embedding_legged = true;
    for (std::size_t j = 0; j < c.chart_count() && rep.embedding_legged; ++j)
        for (std::size_t k = 0; k < c.chart_count(); ++k)
            if (!is_open_embedding(c.rho1[j][k]) || !is_open_embedding(c.rho2[j][k])) {
                rep.embedding_legged = false;
                break;
            }

    if (rep.embedding_legged) {
        auto cover = is_cover(a.alpha, a.total, CoverMode::Pseudogeometric);
        rep.cover_ok = cover.holds;
        if (!cover.holds) rep.detail = "cover: " + cover.reason;
    } else {
        // ramified quotient legs are covering-like without being local
        // subsets (no injective neighborhood at a fixed point); for them a
        // cone covers exactly when the leg images exhaust the target and the
        // legs are diffuse open maps
        rep.cover_ok = true;
        PointSet covered(a.total.size());
        for (const auto& leg : a.alpha) {
            if (!is_diffuse(leg).holds || !is_open_map(leg)) {
                rep.cover_ok = false;
                rep.detail = "cover: a leg is not a diffuse open map";
                break;
            }
            covered |= leg.image_set();
        }
        if (rep.cover_ok && covered.count() != a.total.size()) {
            rep.cover_ok = false;
            rep.detail = "cover: leg images do not exhaust the quotient";
        }
    }

    rep.witness_ok = true;
    for (std::size_t j = 0; j < c.chart_count() && rep.witness_ok; ++j) {
        for (std::size_t k = 0; k < c.chart_count() && rep.witness_ok; ++k) {
            const FinSpace& ov = c.overlaps[j][k];
            std::vector<PointSet> witnessed(c.charts[j].size(), PointSet(c.charts[k].size()));
            for (std::size_t z = 0; z < ov.size(); ++z)
                witnessed[c.rho1[j][k](z)].set(c.rho2[j][k](z));
            for (std::size_t x = 0; x < c.charts[j].size(); ++x)
                for (std::size_t y = 0; y < c.charts[k].size(); ++y) {
                    bool glued = (a.alpha[j](x) == a.alpha[k](y));
                    if (glued != witnessed[x].test(y)) {
                        rep.witness_ok = false;
                        rep.detail = "identification of chart " + std::to_string(j) + " point " +
                                     c.charts[j].name(x) + " with chart " + std::to_string(k) +
                                     " point " + c.charts[k].name(y) +
                                     (glued ? " lacks an overlap witness" : " is not realized");
                        break;
                    }
                }
        }
    }

    rep.product_ok = true;
    if (rep.embedding_legged) {
        for (std::size_t j = 0; j < c.chart_count() && rep.product_ok; ++j)
            for (std::size_t k = 0; k < c.chart_count() && rep.product_ok; ++k) {
                // set-level pullback inside chart_j x chart_k
                FinSpace prod = product(c.charts[j], c.charts[k]);
                PointSet mask(prod.size());
                for (std::size_t x = 0; x < c.charts[j].size(); ++x)
                    for (std::size_t y = 0; y < c.charts[k].size(); ++y)
                        if (a.alpha[j](x) == a.alpha[k](y))
                            mask.set(x * c.charts[k].size() + y);
                FinSpace pb = prod.subspace(mask);
                const FinSpace& ov = c.overlaps[j][k];
                if (ov.size() != pb.size()) {
                    rep.product_ok = false;
                    break;
                }
                std::vector<std::size_t> into(ov.size());
                auto members = mask_members(mask);
                std::vector<std::size_t> reindex(prod.size(), PointSet::npos);
                for (std::size_t t = 0; t < members.size(); ++t) reindex[members[t]] = t;
                bool ok = true;
                PointSet hit(pb.size());
                for (std::size_t z = 0; z < ov.size(); ++z) {
                    std::size_t cell =
                        c.rho1[j][k](z) * c.charts[k].size() + c.rho2[j][k](z);
                    if (!mask.test(cell)) {
                        ok = false;
                        break;
                    }
                    into[z] = reindex[cell];
                    hit.set(into[z]);
                }
                if (!ok || hit.count() != pb.size()) {
                    rep.product_ok = false;
                    break;
                }
                auto h = ContinuousMap::make(ov, pb, into);
                if (!h.injective() || !is_open_embedding(h)) rep.product_ok = false;
            }
        if (!rep.product_ok && rep.detail.empty())
            rep.detail = "an overlap does not realize the fibered product";
    }

    rep.colimit_ok = true;
    for (const auto& probe : probes_up_to(probe_bound)) {
        ++rep.probes_checked;
        for (const auto& f : enumerate_continuous_maps(a.total, probe, budget)) {
            bool legs_good = true;
            for (std::size_t j = 0; j < c.chart_count() && legs_good; ++j)
                legs_good = is_diffuse(f.compose(a.alpha[j])).holds;
            bool glue_good = is_diffuse(f).holds;
            if (legs_good != glue_good) {
                rep.colimit_ok = false;
                rep.detail = "colimit: legs and glue disagree on diffuseness for a map into a " +
                             std::to_string(probe.size()) + "-point probe";
                break;
            }
        }
        if (!rep.colimit_ok) break;
    }
    return rep;
}

}  // namespace fintop
