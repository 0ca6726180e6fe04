#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "fintop/space.hpp"

namespace fintop {

constexpr std::size_t kDefaultCatalogCap = 4;
constexpr std::size_t kMaxCatalogSize = 5;

namespace detail {

/// Lexicographically smallest relation-matrix string over all relabelings.
inline std::string canonical_form(const std::vector<PointSet>& minopen) {
    const std::size_t n = minopen.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string s;
        s.reserve(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                s.push_back(minopen[perm[i]].test(perm[j]) ? '1' : '0');
        if (best.empty() || s < best) best = s;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace detail

/**
 * All topologies on exactly n points, one representative per homeomorphism
 * class, in a canonical deterministic order.  Candidate tables are reflexive
 * relations closed under the minimal-open containment rule (i.e. preorders);
 * classes are keyed by the minimal relation matrix over relabelings.
 *
 * Sizes grow fast (1, 3, 9, 33, 139 for n = 1..5); the cap guards the
 * factorial canonicalization.
 */
inline std::vector<FinSpace> probe_catalog(std::size_t n, std::size_t cap = kDefaultCatalogCap) {
    if (cap > kMaxCatalogSize) cap = kMaxCatalogSize;
    if (n > cap) fail(ErrorKind::BudgetExceeded, "probe catalog request exceeds the configured cap");
    if (n == 0) return {FinSpace()};

    std::vector<std::string> forms;
    std::vector<PointSet> minopen(n, PointSet(n));
    // each minopen(i) is a subset containing i: iterate the n*(n-1) free bits
    std::vector<std::pair<std::size_t, std::size_t>> free_bits;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) free_bits.emplace_back(i, j);
    const std::size_t bits = free_bits.size();
    for (std::size_t i = 0; i < n; ++i) minopen[i].set(i);

    for (std::uint64_t code = 0; code < (std::uint64_t(1) << bits); ++code) {
        for (std::size_t b = 0; b < bits; ++b) {
            auto [i, j] = free_bits[b];
            if (code & (std::uint64_t(1) << b))
                minopen[i].set(j);
            else
                minopen[i].reset(j);
        }
        bool ok = true;
        for (std::size_t i = 0; ok && i < n; ++i)
            for (auto j : mask_members(minopen[i]))
                if (!minopen[j].is_subset_of(minopen[i])) {
                    ok = false;
                    break;
                }
        if (ok) forms.push_back(detail::canonical_form(minopen));
    }
    std::sort(forms.begin(), forms.end());
    forms.erase(std::unique(forms.begin(), forms.end()), forms.end());

    std::vector<FinSpace> out;
    out.reserve(forms.size());
    for (const auto& form : forms) {
        std::vector<PointId> names(n);
        std::vector<PointSet> mo(n, PointSet(n));
        for (std::size_t i = 0; i < n; ++i) {
            names[i] = "p" + std::to_string(i);
            for (std::size_t j = 0; j < n; ++j)
                if (form[i * n + j] == '1') mo[i].set(j);
        }
        out.push_back(FinSpace::make_indexed(std::move(names), std::move(mo)));
    }
    return out;
}

/// Concatenated catalogs for sizes 1..n; the probe supply for
/// universal-property checks by enumeration.
inline std::vector<FinSpace> probes_up_to(std::size_t n, std::size_t cap = kDefaultCatalogCap) {
    std::vector<FinSpace> out;
    for (std::size_t k = 1; k <= n; ++k) {
        auto part = probe_catalog(k, cap);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace fintop
