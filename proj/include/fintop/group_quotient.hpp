#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintop/canopy.hpp"

namespace fintop {

/// Orbit-space quotient of a group action: A with the quotient topology and
/// the projection b, whose fibers are exactly the orbits.  For actions by
/// homeomorphisms the projection is automatically open.
inline SpaceFamilyHandle build_quotient(const GroupAction& action) {
    return quotient_space(action.space(), action.orbits());
}

struct QuotientCertificate {
    GroupAction action;
    PointSet free_locus;               // U
    PointSet upper_ramification;       // K = B - U
    SpaceFamilyHandle quotient;        // (A, b)
    PointSet lower_ramification;       // b(K)
    SeparationCheck separation;
    bool ramification_negligible = false;
    bool accepted = false;
    std::string reject_reason;
    // recorded on acceptance
    bool quotient_map_diffuse = false;
    bool lower_ramification_negligible = false;

    const ContinuousMap& projection() const { return *quotient.projection; }
};

/**
 * Certifies that the orbit quotient of the action behaves like a covering
 * map for diffuse morphisms: the upper ramification set must be negligible
 * and distinct orbit points must be separable by open sets.  Acceptance
 * additionally records that the projection is diffuse and that the lower
 * ramification set is negligible in the quotient, which the hypotheses
 * imply.
 */
inline QuotientCertificate certify_quotient(const GroupAction& action) {
    Ramification ram = upper_ramification(action);
    SpaceFamilyHandle q = build_quotient(action);
    QuotientCertificate cert{action,
                             ram.free_locus,
                             ram.upper,
                             q,
                             q.projection->image(ram.upper),
                             separation_check(action),
                             false,
                             false,
                             ""};
    cert.ramification_negligible = is_negligible_subset(action.space(), ram.upper);
    if (!cert.ramification_negligible) {
        cert.reject_reason = "ramification not negligible";
        return cert;
    }
    if (!cert.separation.holds) {
        cert.reject_reason = "orbit separation fails";
        return cert;
    }
    cert.accepted = true;
    cert.quotient_map_diffuse = is_diffuse(*q.projection).holds;
    cert.lower_ramification_negligible =
        is_negligible_subset(q.total, cert.lower_ramification);
    return cert;
}

struct QuotientPropertyViolation {
    std::size_t probe_size;
    std::string map_description;
    bool map_diffuse;
    bool composite_diffuse;
};

struct QuotientPropertyReport {
    bool projection_diffuse = false;
    std::optional<SubsetElement> projection_witness;  // non-pulled-back element
    std::vector<QuotientPropertyViolation> violations;
    std::size_t probes_checked = 0;
    std::uint64_t maps_checked = 0;

    bool holds() const { return projection_diffuse && violations.empty(); }
};

/**
 * Exhaustive scan of the quotient property: for every probe Y up to the
 * bound and every continuous h : A -> Y, h must be diffuse exactly when
 * h o b is.  The projection's own diffuseness is reported alongside.  The
 * scan runs on rejected certificates too; it reports whatever violations
 * exist rather than assuming any.
 */
inline QuotientPropertyReport quotient_property_check(const QuotientCertificate& cert,
                                                      std::size_t probe_bound,
                                                      std::uint64_t budget = kDefaultEnumerationBudget) {
    QuotientPropertyReport rep;
    const ContinuousMap& b = cert.projection();
    auto bcheck = is_diffuse(b);
    rep.projection_diffuse = bcheck.holds;
    rep.projection_witness = bcheck.witness;
    for (const auto& probe : probes_up_to(probe_bound)) {
        ++rep.probes_checked;
        for (const auto& h : enumerate_continuous_maps(cert.quotient.total, probe, budget)) {
            ++rep.maps_checked;
            bool hd = is_diffuse(h).holds;
            bool cd = is_diffuse(h.compose(b)).holds;
            if (hd != cd)
                rep.violations.push_back(
                    QuotientPropertyViolation{probe.size(), h.describe(), hd, cd});
        }
    }
    return rep;
}

/// Fiber cardinality bound: every fiber of the map has at most n points.
inline bool fiber_bound_check(const ContinuousMap& f, std::size_t n) {
    for (std::size_t y = 0; y < f.cod().size(); ++y)
        if (f.fiber(y).count() > n) return false;
    return true;
}

/// The quotient constructed via the canopy route, cross-checked against the
/// direct orbit-space construction; returns the witnessing homeomorphism
/// data or nothing when the two disagree.
inline bool quotient_matches_affinization(const GroupAction& action) {
    SpaceFamilyHandle direct = build_quotient(action);
    Affinization aff = affinize(canopy_from_group_action(action));
    // orbit(x) -> class of (x in chart 0); well-defined by the relation
    const ContinuousMap& b = *direct.projection;
    const ContinuousMap& a0 = aff.alpha[0];
    std::vector<std::size_t> fwd(direct.total.size(), PointSet::npos);
    for (std::size_t x = 0; x < action.space().size(); ++x) {
        std::size_t& slot = fwd[b(x)];
        if (slot == PointSet::npos)
            slot = a0(x);
        else if (slot != a0(x))
            return false;
    }
    PointSet hit(aff.total.size());
    for (auto v : fwd) {
        if (v == PointSet::npos) return false;
        hit.set(v);
    }
    if (hit.count() != aff.total.size() || direct.total.size() != aff.total.size()) return false;
    auto h = ContinuousMap::make(direct.total, aff.total, fwd);
    return is_open_embedding(h) && h.surjective();
}

}  // namespace fintop
