#include "nnv/geometry/ray.hpp"

#include <algorithm>
#include <cmath>

#include "nnv/errors.hpp"
#include "nnv/geometry/predicates.hpp"

namespace nnv::geom {

std::optional<RayHit> ray_segment_intersection(Point2 origin, double angle,
                                               const Segment& seg) {
    Point2 u = direction_from_angle(angle);
    Point2 v = seg.q - seg.p;
    Point2 w = seg.p - origin;
    double seg_len = norm(v);
    double denom = cross(u, v);

    if (std::abs(denom) <= 1e-12 * seg_len) {
        // Parallel. Distance from origin to the supporting line decides
        // whether we are in the collinear-overlap case.
        double offset = std::abs(cross(u, w));
        if (offset > kCoordTol) return std::nullopt;
        double tp = dot(w, u);
        double tq = dot(seg.q - origin, u);
        bool p_near = tp <= tq;
        double t0 = p_near ? tp : tq;
        double t1 = p_near ? tq : tp;
        if (t1 <= kMinHitDistance) return std::nullopt;  // behind the origin
        if (t0 <= kMinHitDistance) return std::nullopt;  // overlap starts at origin
        Point2 near_end = p_near ? seg.p : seg.q;
        return RayHit{near_end, t0};
    }

    // Solve origin + t*u = seg.p + s*v.
    double t = cross(w, v) / denom;
    double s = cross(w, u) / denom;
    double s_tol = kCoordTol / seg_len;
    if (s < -s_tol || s > 1.0 + s_tol) return std::nullopt;
    if (t < -kMinHitDistance) return std::nullopt;
    s = std::clamp(s, 0.0, 1.0);
    t = std::max(t, 0.0);
    Point2 hit = seg.p + s * v;
    // Exact endpoint coordinates when the hit lands on a segment endpoint.
    if (s == 0.0) hit = seg.p;
    if (s == 1.0) hit = seg.q;
    return RayHit{hit, t};
}

std::optional<WorkspaceHit> first_hit_opt(Point2 origin, double angle,
                                          const WorkspaceSpec& workspace) {
    std::optional<WorkspaceHit> best;
    for (const auto& [id, seg] : workspace.edges()) {
        auto hit = ray_segment_intersection(origin, angle, seg);
        if (!hit || hit->distance <= kMinHitDistance) continue;
        if (!best || hit->distance < best->distance - kMinHitDistance) {
            best = WorkspaceHit{hit->point, hit->distance, id};
        }
        // Ties keep the earlier (lower) edge id.
    }
    return best;
}

WorkspaceHit first_hit(Point2 origin, double angle,
                       const WorkspaceSpec& workspace) {
    auto hit = first_hit_opt(origin, angle, workspace);
    if (!hit) {
        throw NoHit("ray from (" + std::to_string(origin.x) + ", " +
                    std::to_string(origin.y) + ") escapes the workspace");
    }
    return *hit;
}

namespace {

// True when candidate collinearly overlaps seg over a positive length.
bool collinear_overlap(const Segment& candidate, const Segment& seg) {
    if (orientation(candidate.p, candidate.q, seg.p) != 0) return false;
    if (orientation(candidate.p, candidate.q, seg.q) != 0) return false;
    Point2 d = candidate.q - candidate.p;
    double len2 = dot(d, d);
    double t0 = dot(seg.p - candidate.p, d) / len2;
    double t1 = dot(seg.q - candidate.p, d) / len2;
    if (t0 > t1) std::swap(t0, t1);
    double lo = std::max(t0, 0.0);
    double hi = std::min(t1, 1.0);
    return (hi - lo) * std::sqrt(len2) > kCoordTol;
}

bool same_segment(const Segment& a, const Segment& b) {
    return (a.p == b.p && a.q == b.q) || (a.p == b.q && a.q == b.p);
}

}  // namespace

std::vector<Segment> generate_partition_segments(
    const WorkspaceSpec& workspace, const std::vector<double>& angles,
    bool include_boundary_vertices) {
    std::vector<Segment> out;
    std::vector<Point2> vertices = workspace.all_vertices(include_boundary_vertices);

    for (Point2 v : vertices) {
        for (double a : angles) {
            double dir = a + std::acos(-1.0);
            auto hit = first_hit_opt(v, dir, workspace);
            if (!hit) continue;
            Segment cand{v, hit->point};
            if (length(cand) <= kCoordTol) continue;

            // The segment runs from v to the first edge hit, so its interior
            // crosses no edge: the midpoint classifies the whole segment.
            Point2 mid = 0.5 * (cand.p + cand.q);
            if (!workspace.boundary().contains(mid)) continue;
            bool inside_obstacle = false;
            for (const auto& o : workspace.obstacles()) {
                if (o.strictly_contains(mid)) {
                    inside_obstacle = true;
                    break;
                }
            }
            if (inside_obstacle) continue;

            bool overlaps_edge = false;
            for (const auto& [id, seg] : workspace.edges()) {
                if (collinear_overlap(cand, seg)) {
                    overlaps_edge = true;
                    break;
                }
            }
            if (overlaps_edge) continue;

            bool dup = false;
            for (const auto& s : out) {
                if (same_segment(s, cand)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) out.push_back(cand);
        }
    }
    return out;
}

}  // namespace nnv::geom
