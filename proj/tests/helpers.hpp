#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "fintop/fintop.hpp"
#include "fintop/io.hpp"

namespace testutil {

using namespace fintop;

inline std::string fixture_path(const std::string& name) {
    return std::string(FINTOP_FIXTURE_DIR) + "/" + name;
}

inline FinSpace load_space(const std::string& file) {
    return io::parse_topo_text(io::read_file(fixture_path(file)), file).space;
}

// -- standard fixtures built in code -----------------------------------------

inline FinSpace sierpinski() {
    return FinSpace::make({"z0", "z1"}, {{"z0", {"z0", "z1"}}, {"z1", {"z1"}}});
}

inline FinSpace line3() {
    return FinSpace::make({"l", "m", "r"},
                          {{"l", {"l"}}, {"m", {"l", "m", "r"}}, {"r", {"r"}}});
}

inline FinSpace k5() {
    return FinSpace::make({"c0", "c1", "c2", "c3", "c4"},
                          {{"c0", {"c0", "c1"}},
                           {"c1", {"c1"}},
                           {"c2", {"c1", "c2", "c3"}},
                           {"c3", {"c3"}},
                           {"c4", {"c3", "c4"}}});
}

inline FinSpace p9() { return product(line3(), line3()); }
inline FinSpace p25() { return product(k5(), k5()); }

inline FinSpace point_space() { return FinSpace::make({"pt"}, {{"pt", {"pt"}}}); }

/// The half-turn on p9/p25 style grids: coordinatewise reversal.
inline ContinuousMap grid_rotation(const FinSpace& grid, const FinSpace& axis) {
    // axis has points a_0..a_{n-1}; reversal sends index i to n-1-i
    const std::size_t n = axis.size();
    std::vector<std::size_t> v(grid.size());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) v[a * n + b] = (n - 1 - a) * n + (n - 1 - b);
    return ContinuousMap::make(grid, grid, std::move(v));
}

inline ContinuousMap grid_swap(const FinSpace& grid, const FinSpace& axis) {
    const std::size_t n = axis.size();
    std::vector<std::size_t> v(grid.size());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) v[a * n + b] = b * n + a;
    return ContinuousMap::make(grid, grid, std::move(v));
}

// -- independent test-side oracles -------------------------------------------

/// Opens by raw subset scan (independent of the library's down-set walk).
inline std::vector<PointSet> brute_opens(const FinSpace& s) {
    std::vector<PointSet> out;
    const std::size_t n = s.size();
    for (std::uint64_t code = 0; code < (std::uint64_t(1) << n); ++code) {
        PointSet u(n);
        for (std::size_t i = 0; i < n; ++i)
            if (code & (std::uint64_t(1) << i)) u.set(i);
        bool open = true;
        for (std::size_t i = 0; i < n && open; ++i)
            if (u.test(i))
                for (std::size_t j = 0; j < n; ++j)
                    if (s.minopen(i).test(j) && !u.test(j)) {
                        open = false;
                        break;
                    }
        if (open) out.push_back(u);
    }
    return out;
}

/// Connectivity via reachability closure of the comparability matrix.
inline bool brute_connected(const FinSpace& s, const PointSet& set) {
    if (set.none()) return false;
    const std::size_t n = s.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            reach[i][j] = set.test(i) && set.test(j) &&
                          (i == j || s.minopen(i).test(j) || s.minopen(j).test(i));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    auto first = set.find_first();
    for (auto i = set.find_first(); i != PointSet::npos; i = set.find_next(i))
        if (!reach[first][i]) return false;
    return true;
}

/// Closure oracle: smallest closed superset by scanning all closed sets.
inline PointSet brute_closure(const FinSpace& s, const PointSet& set) {
    PointSet best = s.full_set();
    for (const auto& u : brute_opens(s)) {
        PointSet closed = ~u & s.full_set();
        if (set.is_subset_of(closed) && closed.count() < best.count()) best = closed;
    }
    return best;
}

/// Z-density oracle: raw scan over all subsets, independent connectivity.
inline bool brute_zdense(const FinSpace& s, const PointSet& u) {
    for (const auto& c : brute_opens(s)) {
        if (c.none() || !brute_connected(s, c)) continue;
        PointSet meet = c & u;
        if (meet.none() || !brute_connected(s, meet)) return false;
    }
    return true;
}

inline bool brute_negligible(const FinSpace& s, const PointSet& i) {
    PointSet comp = ~i & s.full_set();
    bool open = true;
    for (auto x = comp.find_first(); x != PointSet::npos; x = comp.find_next(x))
        if (!s.minopen(x).is_subset_of(comp)) open = false;
    return open && brute_zdense(s, comp);
}

/// Homeomorphism search by permutations; for small spaces only.
inline bool brute_homeomorphic(const FinSpace& a, const FinSpace& b) {
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (a.minopen(i).test(j) != b.minopen(perm[i]).test(perm[j])) {
                    ok = false;
                    break;
                }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Deterministic random spaces: a random reflexive relation, transitively
/// closed, read as the minimal-open table.
inline FinSpace random_space(std::mt19937& rng, std::size_t n, double density = 0.25) {
    std::vector<PointSet> rel(n, PointSet(n));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        rel[i].set(i);
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coin(rng) < density) rel[i].set(j);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (rel[i].test(j) && !rel[j].is_subset_of(rel[i])) {
                    rel[i] |= rel[j];
                    changed = true;
                }
    }
    std::vector<PointId> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = "q" + std::to_string(i);
    return FinSpace::make_indexed(std::move(names), std::move(rel));
}

}  // namespace testutil
