#pragma once

#include <optional>
#include <vector>

#include "fintop/map.hpp"
#include "fintop/space.hpp"

namespace fintop {

/// Carrier for constructed unions and quotients: the total space, the
/// injections of a disjoint union, or the projection of a quotient.
struct SpaceFamilyHandle {
    FinSpace total;
    std::vector<FinSpace> parts;
    std::vector<ContinuousMap> injections;      // part -> total, open embeddings
    std::optional<ContinuousMap> projection;    // source -> total, surjective
};

/// Tagged disjoint union.  Point (x in part j) is named "j:x"; each injection
/// is an open embedding onto its block.
inline SpaceFamilyHandle disjoint_union(const std::vector<FinSpace>& parts) {
    if (parts.empty()) fail(ErrorKind::EmptyList, "disjoint union of an empty family");
    std::size_t n = 0;
    for (const auto& p : parts) n += p.size();
    std::vector<PointId> names;
    std::vector<PointSet> minopen;
    names.reserve(n);
    minopen.reserve(n);
    std::vector<std::size_t> offset(parts.size());
    std::size_t at = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        offset[j] = at;
        for (std::size_t i = 0; i < parts[j].size(); ++i) {
            names.push_back(std::to_string(j) + ":" + parts[j].name(i));
            PointSet m(n);
            for (auto q : mask_members(parts[j].minopen(i))) m.set(at + q);
            minopen.push_back(std::move(m));
        }
        at += parts[j].size();
    }
    SpaceFamilyHandle out;
    out.total = FinSpace::make_indexed(std::move(names), std::move(minopen));
    out.parts = parts;
    for (std::size_t j = 0; j < parts.size(); ++j) {
        std::vector<std::size_t> v(parts[j].size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = offset[j] + i;
        out.injections.push_back(ContinuousMap::make(parts[j], out.total, std::move(v)));
    }
    return out;
}

/**
 * Quotient space of a partition, with the finest topology making the
 * projection continuous.  A quotient open set is a saturated open set of the
 * source; the minimal open set of a class is computed by alternately closing
 * under minimal opens and under saturation until stable.
 */
inline SpaceFamilyHandle quotient_space(const FinSpace& space,
                                        const std::vector<PointSet>& partition) {
    PointSet seen(space.size());
    for (const auto& cls : partition) {
        space.require_subset(cls);
        if (cls.none()) fail(ErrorKind::NotAPartition, "partition contains an empty class");
        if (cls.intersects(seen)) fail(ErrorKind::NotAPartition, "partition classes overlap");
        seen |= cls;
    }
    if (seen.count() != space.size())
        fail(ErrorKind::NotAPartition, "partition does not cover the space");

    // canonical class order: by smallest member
    std::vector<PointSet> classes = partition;
    std::sort(classes.begin(), classes.end(),
              [](const PointSet& a, const PointSet& b) { return a.find_first() < b.find_first(); });

    std::vector<std::size_t> class_of(space.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (auto i : mask_members(classes[c])) class_of[i] = c;

    auto saturate = [&](PointSet s) {
        PointSet out(space.size());
        for (auto i : mask_members(s)) out |= classes[class_of[i]];
        return out;
    };

    const std::size_t k = classes.size();
    std::vector<PointSet> qmin(k, PointSet(k));
    for (std::size_t c = 0; c < k; ++c) {
        PointSet s = classes[c];
        while (true) {
            PointSet grown(space.size());
            for (auto i : mask_members(s)) grown |= space.minopen(i);
            grown = saturate(grown);
            if (grown == s) break;
            s = std::move(grown);
        }
        for (auto i : mask_members(s)) qmin[c].set(class_of[i]);
    }

    std::vector<PointId> names(k);
    for (std::size_t c = 0; c < k; ++c) {
        std::ostringstream os;
        os << "{";
        bool first = true;
        for (auto i : mask_members(classes[c])) {
            if (!first) os << ",";
            os << space.name(i);
            first = false;
        }
        os << "}";
        names[c] = os.str();
    }

    SpaceFamilyHandle out;
    out.total = FinSpace::make_indexed(std::move(names), std::move(qmin));
    out.parts = {space};
    std::vector<std::size_t> proj(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) proj[i] = class_of[i];
    out.projection = ContinuousMap::make(space, out.total, std::move(proj));
    return out;
}

}  // namespace fintop
