#pragma once

#include <optional>
#include <vector>

#include "fintop/catalog.hpp"
#include "fintop/map.hpp"
#include "fintop/negligible.hpp"

namespace fintop {

struct DiffuseCheck {
    bool holds = false;
    // failing element of the codomain and its non-negligible pullback
    std::optional<SubsetElement> witness;
    std::optional<SubsetElement> pullback;
};

/**
 * Diffuseness: every negligible closed subset element (V,J) of the codomain
 * must pull back to a negligible element (f^-1 V, f^-1 J) of the domain.
 * Checking the minimal-carrier generators suffices: the family of elements
 * with negligible pullback is closed under the family rules, and the
 * generators produce every negligible element under those rules.
 */
inline DiffuseCheck is_diffuse(const ContinuousMap& f) {
    for (const auto& e : negligible_generators(f.cod())) {
        SubsetElement back{f.preimage(e.open_set), f.preimage(e.inner)};
        if (!is_negligible_element(f.dom(), back)) return {false, e, back};
    }
    return {true, std::nullopt, std::nullopt};
}

/// A continuous map that passed the diffuseness check, with the certificate
/// retained for reporting.
struct DiffuseMap {
    ContinuousMap map;
    std::vector<std::pair<SubsetElement, SubsetElement>> certificate;  // element, pullback
};

inline DiffuseMap make_diffuse(const ContinuousMap& f) {
    std::vector<std::pair<SubsetElement, SubsetElement>> cert;
    for (const auto& e : negligible_generators(f.cod())) {
        SubsetElement back{f.preimage(e.open_set), f.preimage(e.inner)};
        if (!is_negligible_element(f.dom(), back))
            fail(ErrorKind::NotDiffuse, "a negligible element pulls back to a non-negligible one");
        cert.emplace_back(e, back);
    }
    return DiffuseMap{f, std::move(cert)};
}

/// Open embedding: injective, open image, homeomorphism onto the image with
/// its subspace topology.
inline bool is_open_embedding(const ContinuousMap& f) {
    if (!f.injective()) return false;
    PointSet img = f.image_set();
    if (!f.cod().is_open(img)) return false;
    // continuous bijection onto the image; openness of the inverse reduces to
    // minopen(f(x)) & img == f(minopen(x))
    for (std::size_t x = 0; x < f.dom().size(); ++x) {
        if ((f.cod().minopen(f(x)) & img) != f.image(f.dom().minopen(x))) return false;
    }
    return true;
}

/// Local-subset test: the domain must be covered by open sets on which the
/// map restricts to an open embedding, with fiber points mutually
/// topologically separated (each fiber point has a neighborhood missing the
/// others).  Minimal opens decide both conditions on finite spaces.
/// Requires a diffuse map.
struct LocalSubsetCheck {
    bool holds = false;
    std::optional<std::size_t> bad_point;   // no embedded neighborhood
    std::optional<std::pair<std::size_t, std::size_t>> bad_fiber_pair;
};

inline LocalSubsetCheck is_fdl_local_subset(const ContinuousMap& f) {
    if (!is_diffuse(f).holds)
        fail(ErrorKind::NotDiffuse, "local-subset test is defined for diffuse maps");
    LocalSubsetCheck out;
    for (std::size_t x = 0; x < f.dom().size(); ++x) {
        if (!is_open_embedding(f.restrict(f.dom().minopen(x)))) {
            out.bad_point = x;
            return out;
        }
    }
    for (std::size_t x = 0; x < f.dom().size(); ++x) {
        for (std::size_t y = x + 1; y < f.dom().size(); ++y) {
            if (f(x) != f(y)) continue;
            if (f.dom().minopen(x).test(y) || f.dom().minopen(y).test(x)) {
                out.bad_fiber_pair = {x, y};
                return out;
            }
        }
    }
    out.holds = true;
    return out;
}

enum class CoverMode { Pseudogeometric, Pseudoetale };

struct CoverCheck {
    bool holds = false;
    std::string reason;
    std::optional<std::size_t> uncovered_point;
};

/**
 * Cover test.  Pseudogeometric covers consist of open embeddings;
 * pseudoetale covers allow finite discrete local subsets.  In both modes the
 * leg images must exhaust the target.
 */
inline CoverCheck is_cover(const std::vector<ContinuousMap>& legs, const FinSpace& target,
                           CoverMode mode = CoverMode::Pseudogeometric) {
    if (legs.empty()) return {false, "a cover needs at least one leg", std::nullopt};
    for (const auto& leg : legs)
        if (leg.cod() != target)
            fail(ErrorKind::ModeMismatch, "cover legs must share the target space");
    for (std::size_t i = 0; i < legs.size(); ++i) {
        if (mode == CoverMode::Pseudogeometric) {
            if (!is_open_embedding(legs[i]))
                return {false, "leg " + std::to_string(i) + " is not an open embedding",
                        std::nullopt};
        } else {
            if (!is_diffuse(legs[i]).holds)
                return {false, "leg " + std::to_string(i) + " is not diffuse", std::nullopt};
            if (!is_fdl_local_subset(legs[i]).holds)
                return {false, "leg " + std::to_string(i) + " is not a local subset",
                        std::nullopt};
        }
    }
    PointSet covered(target.size());
    for (const auto& leg : legs) covered |= leg.image_set();
    if (covered.count() != target.size()) {
        CoverCheck out{false, "leg images do not exhaust the target", std::nullopt};
        out.uncovered_point = (~covered & target.full_set()).find_first();
        return out;
    }
    return {true, "", std::nullopt};
}

/// A validated cover: diffuse legs into a common target whose images exhaust
/// it, open embeddings or local subsets depending on the mode.
struct Cover {
    FinSpace target;
    std::vector<DiffuseMap> legs;
    CoverMode mode = CoverMode::Pseudogeometric;
};

inline Cover make_cover(const std::vector<ContinuousMap>& legs, const FinSpace& target,
                        CoverMode mode = CoverMode::Pseudogeometric) {
    auto chk = is_cover(legs, target, mode);
    if (!chk.holds) fail(ErrorKind::NotACover, chk.reason);
    Cover out{target, {}, mode};
    for (const auto& l : legs) out.legs.push_back(make_diffuse(l));
    return out;
}

/// Pullback of an open embedding u along f: V = f^-1(im u) with the subspace
/// topology, v the injection, g the corestriction through u.
struct EmbeddingPullback {
    FinSpace total;      // V
    ContinuousMap into_dom;   // v : V -> dom(f)
    ContinuousMap into_sub;   // g : V -> dom(u)
};

inline EmbeddingPullback pullback_embedding(const ContinuousMap& f, const ContinuousMap& u) {
    if (u.cod() != f.cod()) fail(ErrorKind::SpaceMismatch, "pullback legs must share a codomain");
    if (!is_open_embedding(u)) fail(ErrorKind::NotEmbedding, "pullback base must be an open embedding");
    PointSet img = u.image_set();
    PointSet v_mask = f.preimage(img);
    ContinuousMap v = ContinuousMap::inclusion(f.dom(), v_mask);
    // u^-1 on its image
    std::vector<std::size_t> inverse(u.cod().size(), PointSet::npos);
    for (std::size_t i = 0; i < u.dom().size(); ++i) inverse[u(i)] = i;
    std::vector<std::size_t> g_values;
    g_values.reserve(v.dom().size());
    for (auto i : mask_members(v_mask)) g_values.push_back(inverse[f(i)]);
    ContinuousMap g = ContinuousMap::make(v.dom(), u.dom(), std::move(g_values));
    return EmbeddingPullback{v.dom(), v, g};
}

struct DiscretenessVerdict {
    bool separated = true;            // fiber pairs topologically separated
    bool probe_discrete = true;       // no equalizing restriction found
    std::size_t probe_bound = 0;
    std::optional<std::pair<std::size_t, std::size_t>> separation_witness;
    std::string detail;
};

/**
 * Probe-bounded discreteness verdict.  Checks (i) the fiber separation
 * condition, and (ii) for every probe space D up to the bound and every pair
 * of distinct lifts g1 != g2 : D -> dom with f o g1 = f o g2, that their
 * agreement set is complemented (a union of connected components of D): a
 * covering-like map leaves no room for two lifts to agree on part of a
 * component and split inside it.  The verdict is an approximation, labeled
 * with the probe size; it is not the full categorical predicate, which
 * quantifies over all objects.
 */
inline DiscretenessVerdict discreteness_probe(const ContinuousMap& f, std::size_t probe_bound,
                                              std::uint64_t budget = kDefaultEnumerationBudget) {
    DiscretenessVerdict out;
    out.probe_bound = probe_bound;
    for (std::size_t x = 0; x < f.dom().size() && out.separated; ++x)
        for (std::size_t y = x + 1; y < f.dom().size(); ++y) {
            if (f(x) != f(y)) continue;
            if (f.dom().minopen(x).test(y) || f.dom().minopen(y).test(x)) {
                out.separated = false;
                out.separation_witness = {x, y};
                out.detail = "fiber points " + f.dom().name(x) + ", " + f.dom().name(y) +
                             " cannot be separated";
                break;
            }
        }
    for (const auto& probe : probes_up_to(probe_bound)) {
        auto lifts = enumerate_continuous_maps(probe, f.dom(), budget);
        for (std::size_t a = 0; a < lifts.size() && out.probe_discrete; ++a) {
            for (std::size_t b = a + 1; b < lifts.size(); ++b) {
                if (f.compose(lifts[a]) != f.compose(lifts[b])) continue;
                // agreement set must be a union of connected components
                PointSet agree(probe.size());
                for (std::size_t i = 0; i < probe.size(); ++i)
                    if (lifts[a](i) == lifts[b](i)) agree.set(i);
                bool complemented = true;
                for (const auto& comp : probe.components(probe.full_set())) {
                    PointSet meet = comp & agree;
                    if (meet.any() && meet != comp) {
                        complemented = false;
                        break;
                    }
                }
                if (!complemented) {
                    out.probe_discrete = false;
                    out.detail = "two distinct lifts split inside a connected component";
                    break;
                }
            }
        }
        if (!out.probe_discrete) break;
    }
    return out;
}

}  // namespace fintop
