#pragma once

#include <vector>

#include "nnv/geometry/sweep.hpp"

namespace nnv::geom {

// Planar straight-line graph: nodes are segment endpoints and intersection
// points (merged within kCoordTol), edges are the input segments split at
// every node lying on them. Edges meet only at shared nodes.
struct PlanarSubdivision {
    std::vector<Point2> nodes;
    std::vector<std::pair<int, int>> edges;  // node index pairs, first < second
};

PlanarSubdivision build_planar_subdivision(const std::vector<Segment>& segments);

// All bounded faces of the subdivision as counterclockwise node-index cycles,
// found by rightmost-turn traversal of directed edges. The unbounded face of
// each connected component is excluded.
std::vector<std::vector<int>> extract_faces(const PlanarSubdivision& sub);

}  // namespace nnv::geom
