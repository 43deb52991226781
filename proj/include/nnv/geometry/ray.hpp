#pragma once

#include <optional>

#include "nnv/geometry/workspace.hpp"

namespace nnv::geom {

struct RayHit {
    Point2 point;
    double distance = 0.0;  // along the ray; the ray direction is unit length
};

// Nearest point of `seg` on the closed ray from `origin` with direction
// `angle`. Total function: returns nullopt when the ray misses the segment.
// For a collinear overlap the nearest overlap point at strictly positive
// distance is returned; if the overlap begins at the origin there is no such
// nearest point and the result is nullopt.
std::optional<RayHit> ray_segment_intersection(Point2 origin, double angle,
                                               const Segment& seg);

struct WorkspaceHit {
    Point2 point;
    double distance = 0.0;
    EdgeId edge;
};

// First hit of the ray against any boundary or obstacle edge, ignoring hits
// closer than kMinHitDistance. Distance ties are broken by lowest EdgeId.
std::optional<WorkspaceHit> first_hit_opt(Point2 origin, double angle,
                                          const WorkspaceSpec& workspace);

// Same, but throws NoHit when the ray escapes (invalid input for interior
// origins of a compact workspace).
WorkspaceHit first_hit(Point2 origin, double angle,
                       const WorkspaceSpec& workspace);

// Partition segments: for every polygon vertex v (obstacles always, boundary
// vertices when include_boundary_vertices) and every angle a, the segment
// from v to the first edge hit of the ray with direction a + pi. Segments
// that would run through an obstacle interior or outside the boundary, and
// segments collinearly overlapping an existing polygon edge, are omitted.
// Exact duplicates are emitted once.
std::vector<Segment> generate_partition_segments(
    const WorkspaceSpec& workspace, const std::vector<double>& angles,
    bool include_boundary_vertices = true);

}  // namespace nnv::geom
