#include "nnv/geometry/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nnv/errors.hpp"

namespace nnv::geom {

namespace {

// Angle set closed under adding pi, deduplicated modulo 2*pi.
std::vector<double> closed_angle_set(const std::vector<double>& angles) {
    std::vector<double> all;
    for (double a : angles) {
        all.push_back(normalize_angle(a));
        all.push_back(normalize_angle(a + std::numbers::pi));
    }
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double a : all) {
        if (out.empty() || a - out.back() > 1e-12) out.push_back(a);
    }
    // First and last may alias modulo 2*pi.
    if (out.size() > 1 &&
        (2.0 * std::numbers::pi - out.back()) + out.front() <= 1e-12) {
        out.pop_back();
    }
    return out;
}

RegionKind classify(const ConvexPolygon& region, const WorkspaceSpec& w) {
    Point2 c = region.centroid();
    for (const auto& o : w.obstacles()) {
        if (o.strictly_contains(c)) return RegionKind::obstacle_interior;
    }
    return RegionKind::free;
}

}  // namespace

int PartitionResult::free_region_count() const {
    int n = 0;
    for (RegionKind k : region_kind) {
        if (k == RegionKind::free) ++n;
    }
    return n;
}

std::vector<ConvexPolygon> partition_cells(const WorkspaceSpec& workspace,
                                           const std::vector<double>& angles,
                                           bool include_boundary_vertices) {
    std::vector<double> dirs = closed_angle_set(angles);
    std::vector<Segment> segments =
        generate_partition_segments(workspace, dirs, include_boundary_vertices);
    for (const auto& [id, seg] : workspace.edges()) {
        (void)id;
        segments.push_back(seg);
    }
    PlanarSubdivision sub = build_planar_subdivision(segments);
    std::vector<ConvexPolygon> cells;
    for (const auto& cycle : extract_faces(sub)) {
        std::vector<Point2> pts;
        pts.reserve(cycle.size());
        for (int id : cycle) pts.push_back(sub.nodes[id]);
        cells.push_back(convex_hull(pts));
    }
    return cells;
}

PartitionResult wksp_partition(const WorkspaceSpec& workspace,
                               const LidarSpec& lidar,
                               const PartitionOptions& opts) {
    PartitionResult out;
    out.fine_regions = partition_cells(workspace, lidar.angles(),
                                       opts.include_boundary_vertices);
    out.aggregate_regions = partition_cells(workspace, lidar.primary_angles(),
                                            opts.include_boundary_vertices);

    for (const auto& r : out.fine_regions) {
        out.region_kind.push_back(classify(r, workspace));
    }
    for (const auto& r : out.aggregate_regions) {
        out.aggregate_kind.push_back(classify(r, workspace));
    }

    // A fine-region centroid lies strictly inside exactly one aggregate cell
    // because the aggregate cut lines are a subset of the fine cut lines.
    out.fine_to_aggregate.assign(out.fine_regions.size(), -1);
    for (size_t i = 0; i < out.fine_regions.size(); ++i) {
        Point2 c = out.fine_regions[i].centroid();
        int found = -1;
        for (size_t a = 0; a < out.aggregate_regions.size(); ++a) {
            if (out.aggregate_regions[a].contains(c)) {
                found = static_cast<int>(a);
                break;
            }
        }
        if (found < 0) {
            throw InternalError(
                "partition: fine region has no containing aggregate region");
        }
        out.fine_to_aggregate[i] = found;
    }

    double covered = 0.0;
    for (const auto& r : out.fine_regions) covered += r.area();
    double total = workspace.boundary().area();
    if (std::abs(covered - total) > 1e-9 * total) {
        throw InternalError("partition: region areas do not cover the workspace");
    }
    return out;
}

}  // namespace nnv::geom
