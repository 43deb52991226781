#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nnv/geometry/partition.hpp"

namespace nnv::imaging {

using geom::ConvexPolygon;
using geom::EdgeId;
using geom::LidarSpec;
using geom::Point2;
using geom::WorkspaceSpec;

// The sub-segment (a, b) of one workspace edge that a laser can hit from
// anywhere inside one region.
struct HitEdge {
    Point2 a;
    Point2 b;
    EdgeId source;
};

using Mat2 = std::array<std::array<double, 2>, 2>;
using Vec2 = std::array<double, 2>;

// Affine map of one laser over one region: displacement d_k(z) = P*z + Q.
// nu_a, nu_b give the interpolation parameter along the hit edge,
// nu(z) = nu_a . z + nu_b, which stays in [0, 1] over the region.
struct LaserMap {
    Mat2 P{};
    Vec2 Q{};
    Vec2 nu_a{};
    double nu_b = 0.0;
    HitEdge edge;
};

// Full stacked map d : R^2 -> R^{2N} for one region.
struct AffineImagingMap {
    ConvexPolygon region;
    std::vector<LaserMap> lasers;

    int laser_count() const { return static_cast<int>(lasers.size()); }
};

// The unique edge a laser at `angle` hits from everywhere in `region`, with
// the extreme hit points from the region vertices clipped to that edge.
// Throws NotImagingAdapted when casts from the region's vertices (offset
// inward by 1e-9) disagree on the edge, which signals a partition bug.
HitEdge hit_edge_for_region(const ConvexPolygon& region, double angle,
                            const WorkspaceSpec& workspace);

// Affine coefficients for one laser/region/edge triple, obtained from the
// 2x2 linear solve for the ray/edge interpolation parameter. Throws
// ParallelDegenerate when the laser direction is parallel to the edge.
LaserMap imaging_map(const ConvexPolygon& region, double angle,
                     const HitEdge& edge);

// All lasers for one region.
AffineImagingMap region_imaging_map(const ConvexPolygon& region,
                                    const LidarSpec& lidar,
                                    const WorkspaceSpec& workspace);

// Maps for every free region of the partition; obstacle regions get nullopt.
std::vector<std::optional<AffineImagingMap>> build_imaging_maps(
    const geom::PartitionResult& partition, const LidarSpec& lidar,
    const WorkspaceSpec& workspace);

// Stacked affine image (d_1, ..., d_N) evaluated at `position`, which must
// lie in the owning region (throws OutOfRegion otherwise).
std::vector<double> lidar_image_affine(Point2 position,
                                       const AffineImagingMap& maps);

// Independent oracle: per laser, the distance to the first edge hit,
// returned as (r cos t, r sin t) pairs.
std::vector<double> lidar_image_bruteforce(Point2 position,
                                           const WorkspaceSpec& workspace,
                                           const LidarSpec& lidar);

}  // namespace nnv::imaging
