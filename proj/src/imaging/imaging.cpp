#include "nnv/imaging/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnv/errors.hpp"
#include "nnv/geometry/ray.hpp"

namespace nnv::imaging {

namespace {

using geom::cross;
using geom::direction_from_angle;
using geom::distance;
using geom::dot;
using geom::kCoordTol;
using geom::Segment;

// Intersection parameter of the ray from `origin` with the supporting line of
// edge (p, q), expressed along the edge: hit = p + tau * (q - p). Well defined
// for vertices lying on the line itself.
double ray_line_tau(Point2 origin, Point2 u, Point2 p, Point2 q) {
    Point2 w = q - p;
    double denom = cross(u, w);
    if (std::abs(denom) <= 1e-12 * geom::norm(w)) {
        throw ParallelDegenerate("laser direction parallel to hit edge");
    }
    return cross(u, origin - p) / denom;
}

}  // namespace

HitEdge hit_edge_for_region(const ConvexPolygon& region, double angle,
                            const WorkspaceSpec& workspace) {
    Point2 c = region.centroid();
    geom::WorkspaceHit center = geom::first_hit(c, angle, workspace);

    // Verify the edge identity from every vertex, nudged inward so casts from
    // vertices lying on obstacle edges stay well defined.
    for (Point2 v : region.vertices()) {
        Point2 inward = c - v;
        double len = geom::norm(inward);
        Point2 probe = v + (1e-9 / len) * inward;
        geom::WorkspaceHit h = geom::first_hit(probe, angle, workspace);
        if (h.edge != center.edge) {
            throw NotImagingAdapted(
                "region vertices disagree on the hit edge for a laser");
        }
    }

    // Exact extreme hit points: intersect vertex rays with the supporting
    // line of the hit edge, then clip to the edge.
    Segment edge = workspace.edge(center.edge);
    Point2 u = direction_from_angle(angle);
    double tau_min = std::numeric_limits<double>::infinity();
    double tau_max = -std::numeric_limits<double>::infinity();
    for (Point2 v : region.vertices()) {
        double tau = ray_line_tau(v, u, edge.p, edge.q);
        tau_min = std::min(tau_min, tau);
        tau_max = std::max(tau_max, tau);
    }
    tau_min = std::clamp(tau_min, 0.0, 1.0);
    tau_max = std::clamp(tau_max, 0.0, 1.0);
    Point2 w = edge.q - edge.p;
    HitEdge out;
    out.a = edge.p + tau_min * w;
    out.b = edge.p + tau_max * w;
    out.source = center.edge;
    if (distance(out.a, out.b) <= 1e-12) {
        throw ParallelDegenerate("hit segment degenerates to a point");
    }
    return out;
}

LaserMap imaging_map(const ConvexPolygon& region, double angle,
                     const HitEdge& edge) {
    (void)region;
    Point2 u = direction_from_angle(angle);
    Point2 e = edge.b - edge.a;

    // Solve [e, -u] * (nu, r)^T = z - a for nu as an affine function of z.
    double det = e.x * (-u.y) - (-u.x) * e.y;
    if (std::abs(det) <= 1e-12 * geom::norm(e)) {
        throw ParallelDegenerate("laser direction parallel to hit edge");
    }
    // First row of the inverse of [[e.x, -u.x], [e.y, -u.y]].
    Vec2 nu_a{-u.y / det, u.x / det};
    double nu_b = -(nu_a[0] * edge.a.x + nu_a[1] * edge.a.y);

    LaserMap m;
    m.nu_a = nu_a;
    m.nu_b = nu_b;
    m.edge = edge;
    // d(z) = a + nu(z) * e - z  =>  P = e * nu_a^T - I, Q = a + nu_b * e.
    m.P[0][0] = e.x * nu_a[0] - 1.0;
    m.P[0][1] = e.x * nu_a[1];
    m.P[1][0] = e.y * nu_a[0];
    m.P[1][1] = e.y * nu_a[1] - 1.0;
    m.Q[0] = edge.a.x + nu_b * e.x;
    m.Q[1] = edge.a.y + nu_b * e.y;
    return m;
}

AffineImagingMap region_imaging_map(const ConvexPolygon& region,
                                    const LidarSpec& lidar,
                                    const WorkspaceSpec& workspace) {
    AffineImagingMap out;
    out.region = region;
    out.lasers.reserve(lidar.laser_count);
    for (int i = 1; i <= lidar.laser_count; ++i) {
        double angle = lidar.angle(i);
        HitEdge edge = hit_edge_for_region(region, angle, workspace);
        out.lasers.push_back(imaging_map(region, angle, edge));
    }
    return out;
}

std::vector<std::optional<AffineImagingMap>> build_imaging_maps(
    const geom::PartitionResult& partition, const LidarSpec& lidar,
    const WorkspaceSpec& workspace) {
    std::vector<std::optional<AffineImagingMap>> out(
        partition.fine_regions.size());
    for (size_t i = 0; i < partition.fine_regions.size(); ++i) {
        if (partition.region_kind[i] != geom::RegionKind::free) continue;
        out[i] =
            region_imaging_map(partition.fine_regions[i], lidar, workspace);
    }
    return out;
}

std::vector<double> lidar_image_affine(Point2 position,
                                       const AffineImagingMap& maps) {
    if (!maps.region.contains(position, kCoordTol)) {
        throw OutOfRegion("position is outside the region of this imaging map");
    }
    std::vector<double> d;
    d.reserve(2 * maps.lasers.size());
    for (const LaserMap& m : maps.lasers) {
        d.push_back(m.P[0][0] * position.x + m.P[0][1] * position.y + m.Q[0]);
        d.push_back(m.P[1][0] * position.x + m.P[1][1] * position.y + m.Q[1]);
    }
    return d;
}

std::vector<double> lidar_image_bruteforce(Point2 position,
                                           const WorkspaceSpec& workspace,
                                           const LidarSpec& lidar) {
    std::vector<double> d;
    d.reserve(2 * lidar.laser_count);
    for (int i = 1; i <= lidar.laser_count; ++i) {
        double angle = lidar.angle(i);
        geom::WorkspaceHit hit = geom::first_hit(position, angle, workspace);
        Point2 u = direction_from_angle(angle);
        d.push_back(hit.distance * u.x);
        d.push_back(hit.distance * u.y);
    }
    return d;
}

}  // namespace nnv::imaging
