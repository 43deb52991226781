#pragma once

#include <vector>

#include "nnv/geometry/core.hpp"

namespace nnv::geom {

struct IntersectionPoint {
    Point2 point;
    std::vector<int> segments;  // ids of all incident input segments, sorted
};

// All pairwise intersection points among the input segments, each point
// reported once with every incident segment (shared endpoints included).
// Output follows the sweep order: y descending, then x ascending. Points
// within kCoordTol of each other are merged into a single report.
std::vector<IntersectionPoint> plane_sweep_intersections(
    const std::vector<Segment>& segments);

}  // namespace nnv::geom
