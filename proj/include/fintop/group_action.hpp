#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fintop/map.hpp"

namespace fintop {

/**
 * A finite group acting by homeomorphisms on a finite space.  The group is
 * given by an explicit composition table; construction validates the group
 * axioms, that each assigned map is a homeomorphism, and that assignment is
 * a homomorphism.
 */
class GroupAction {
public:
    static GroupAction make(FinSpace space, std::vector<std::string> element_ids,
                            std::vector<std::vector<std::size_t>> table,
                            std::vector<ContinuousMap> maps) {
        const std::size_t n = element_ids.size();
        if (n == 0) fail(ErrorKind::InvalidAction, "a group needs at least the identity");
        if (table.size() != n) fail(ErrorKind::InvalidAction, "composition table is not square");
        for (const auto& row : table) {
            if (row.size() != n) fail(ErrorKind::InvalidAction, "composition table is not square");
            for (auto v : row)
                if (v >= n) fail(ErrorKind::InvalidAction, "composition table entry out of range");
        }
        // locate the identity
        std::optional<std::size_t> id;
        for (std::size_t e = 0; e < n; ++e) {
            bool ok = true;
            for (std::size_t g = 0; g < n && ok; ++g)
                ok = (table[e][g] == g && table[g][e] == g);
            if (ok) {
                id = e;
                break;
            }
        }
        if (!id) fail(ErrorKind::InvalidAction, "composition table has no identity element");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (table[table[a][b]][c] != table[a][table[b][c]])
                        fail(ErrorKind::InvalidAction, "composition table is not associative");
        for (std::size_t a = 0; a < n; ++a) {
            bool has_inverse = false;
            for (std::size_t b = 0; b < n && !has_inverse; ++b)
                has_inverse = (table[a][b] == *id && table[b][a] == *id);
            if (!has_inverse)
                fail(ErrorKind::InvalidAction, "element '" + element_ids[a] + "' has no inverse");
        }
        if (maps.size() != n) fail(ErrorKind::InvalidAction, "one point map needed per element");
        for (const auto& m : maps)
            if (m.dom() != space || m.cod() != space)
                fail(ErrorKind::InvalidAction, "action maps must be endomaps of the space");
        ContinuousMap identity = ContinuousMap::identity(space);
        if (maps[*id] != identity)
            fail(ErrorKind::InvalidAction, "identity element must act as the identity map");
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (maps[table[a][b]] != maps[a].compose(maps[b]))
                    fail(ErrorKind::InvalidAction, "point maps do not respect the table");
        for (std::size_t a = 0; a < n; ++a)
            if (!maps[a].injective())
                fail(ErrorKind::InvalidAction, "element '" + element_ids[a] + "' does not act by a bijection");
        // bijective + inverse in the group => homeomorphism
        return GroupAction(std::move(space), std::move(element_ids), std::move(table),
                           std::move(maps), *id);
    }

    /// Convenience: the group generated by one involution (or the trivial
    /// group when the map is the identity).
    static GroupAction involution(const FinSpace& space, const ContinuousMap& sigma) {
        ContinuousMap id = ContinuousMap::identity(space);
        if (sigma == id) return make(space, {"e"}, {{0}}, {id});
        if (sigma.compose(sigma) != id)
            fail(ErrorKind::InvalidAction, "generator is not an involution");
        return make(space, {"e", "s"}, {{0, 1}, {1, 0}}, {id, sigma});
    }

    static GroupAction trivial(const FinSpace& space) {
        return make(space, {"e"}, {{0}}, {ContinuousMap::identity(space)});
    }

    const FinSpace& space() const { return space_; }
    std::size_t order() const { return ids_.size(); }
    std::size_t identity_index() const { return identity_; }
    const std::string& element_id(std::size_t g) const { return ids_.at(g); }
    std::size_t compose(std::size_t a, std::size_t b) const { return table_.at(a).at(b); }
    const ContinuousMap& act(std::size_t g) const { return maps_.at(g); }
    std::size_t apply(std::size_t g, std::size_t x) const { return maps_[g](x); }

    std::size_t element_index(const std::string& id) const {
        for (std::size_t g = 0; g < ids_.size(); ++g)
            if (ids_[g] == id) return g;
        fail(ErrorKind::InvalidAction, "unknown group element '" + id + "'");
    }

    PointSet orbit(std::size_t x) const {
        PointSet out(space_.size());
        for (std::size_t g = 0; g < order(); ++g) out.set(apply(g, x));
        return out;
    }

    /// Orbit partition, classes ordered by smallest member.
    std::vector<PointSet> orbits() const {
        std::vector<PointSet> out;
        PointSet seen(space_.size());
        for (std::size_t x = 0; x < space_.size(); ++x) {
            if (seen.test(x)) continue;
            PointSet orb = orbit(x);
            seen |= orb;
            out.push_back(orb);
        }
        return out;
    }

    std::vector<std::size_t> stabilizer(std::size_t x) const {
        std::vector<std::size_t> out;
        for (std::size_t g = 0; g < order(); ++g)
            if (apply(g, x) == x) out.push_back(g);
        return out;
    }

private:
    GroupAction(FinSpace space, std::vector<std::string> ids,
                std::vector<std::vector<std::size_t>> table, std::vector<ContinuousMap> maps,
                std::size_t identity)
        : space_(std::move(space)),
          ids_(std::move(ids)),
          table_(std::move(table)),
          maps_(std::move(maps)),
          identity_(identity) {}

    FinSpace space_;
    std::vector<std::string> ids_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<ContinuousMap> maps_;
    std::size_t identity_;
};

/**
 * Free locus and upper ramification set.  A point is free when some
 * neighborhood V satisfies g.V disjoint from V for every non-identity g;
 * on a finite space the minimal open set works iff any neighborhood does.
 */
struct Ramification {
    PointSet free_locus;           // U
    PointSet upper;                // K = B - U
};

inline Ramification upper_ramification(const GroupAction& action) {
    const FinSpace& b = action.space();
    Ramification out{PointSet(b.size()), PointSet(b.size())};
    for (std::size_t x = 0; x < b.size(); ++x) {
        bool free = true;
        for (std::size_t g = 0; g < action.order() && free; ++g) {
            if (g == action.identity_index()) continue;
            if (action.act(g).image(b.minopen(x)).intersects(b.minopen(x))) free = false;
        }
        if (free)
            out.free_locus.set(x);
        else
            out.upper.set(x);
    }
    return out;
}

struct SeparationWitness {
    std::size_t point;
    std::size_t element;
    bool separated;
    PointSet open_at_point;   // disjoint opens when separated
    PointSet open_at_image;
};

struct SeparationCheck {
    bool holds = true;
    std::vector<SeparationWitness> witnesses;     // one per (x, g) with g.x != x
    PointSet symmetric_basis_points;              // points with a symmetric-neighborhood basis
};

/**
 * Orbit separation: for every x and g with g.x != x, disjoint open
 * neighborhoods of x and g.x must exist; minimal opens decide this exactly.
 * Points whose whole orbit separates this way carry a basis of symmetric
 * neighborhoods (their minimal open set is one).
 */
inline SeparationCheck separation_check(const GroupAction& action) {
    const FinSpace& b = action.space();
    SeparationCheck out;
    out.symmetric_basis_points = PointSet(b.size());
    std::vector<bool> point_ok(b.size(), true);
    for (std::size_t x = 0; x < b.size(); ++x) {
        for (std::size_t g = 0; g < action.order(); ++g) {
            std::size_t y = action.apply(g, x);
            if (y == x) continue;
            bool disjoint = !b.minopen(x).intersects(b.minopen(y));
            out.witnesses.push_back(
                SeparationWitness{x, g, disjoint, b.minopen(x), b.minopen(y)});
            if (!disjoint) {
                out.holds = false;
                point_ok[x] = false;
            }
        }
    }
    for (std::size_t x = 0; x < b.size(); ++x)
        if (point_ok[x]) out.symmetric_basis_points.set(x);
    return out;
}

}  // namespace fintop
