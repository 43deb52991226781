#pragma once

#include <vector>

#include "nnv/geometry/ray.hpp"
#include "nnv/geometry/subdivision.hpp"

namespace nnv::geom {

enum class RegionKind { free, obstacle_interior };

// Imaging-adapted partition of the workspace. fine_regions cover the whole
// boundary polygon (obstacle interiors appear as their own regions);
// aggregate_regions are the coarser cells induced by the primary lasers only,
// and every fine region lies in exactly one aggregate region.
struct PartitionResult {
    std::vector<ConvexPolygon> fine_regions;
    std::vector<RegionKind> region_kind;
    std::vector<ConvexPolygon> aggregate_regions;
    std::vector<RegionKind> aggregate_kind;
    std::vector<int> fine_to_aggregate;

    int free_region_count() const;
};

struct PartitionOptions {
    bool include_boundary_vertices = true;
};

// Partitions the workspace so that within each free region every laser hits
// one fixed obstacle/boundary edge. Rays are cast from every polygon vertex
// along both directions of each laser line; the aggregate partition uses the
// primary lasers only.
PartitionResult wksp_partition(const WorkspaceSpec& workspace,
                               const LidarSpec& lidar,
                               const PartitionOptions& opts = {});

// The cells induced by one angle set (both ray directions per angle).
// Exposed separately so the fine and aggregate passes share one code path.
std::vector<ConvexPolygon> partition_cells(const WorkspaceSpec& workspace,
                                           const std::vector<double>& angles,
                                           bool include_boundary_vertices);

}  // namespace nnv::geom
