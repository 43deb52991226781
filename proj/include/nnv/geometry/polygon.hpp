#pragma once

#include <vector>

#include "nnv/geometry/core.hpp"

namespace nnv::geom {

// Strictly convex polygon with counterclockwise vertex order. Construction
// merges collinear vertices and rejects anything that is not convex/ccw.
class ConvexPolygon {
  public:
    ConvexPolygon() = default;

    // Validates: >=3 vertices after collinear merging, ccw, strictly convex.
    // Throws DegenerateInput otherwise.
    explicit ConvexPolygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return verts_; }
    int size() const { return static_cast<int>(verts_.size()); }
    Point2 vertex(int i) const { return verts_[i]; }
    Segment edge(int i) const {
        return {verts_[i], verts_[(i + 1) % verts_.size()]};
    }

    double area() const;
    Point2 centroid() const;

    // Signed distance of p to the polygon boundary: positive inside.
    double signed_distance(Point2 p) const;

    bool contains(Point2 p, double tol = kCoordTol) const {
        return signed_distance(p) >= -tol;
    }
    bool strictly_contains(Point2 p, double tol = kCoordTol) const {
        return signed_distance(p) > tol;
    }

  private:
    std::vector<Point2> verts_;
};

// Counterclockwise convex hull with collinear boundary points removed.
// Throws DegenerateInput if all points are collinear (or fewer than 3).
ConvexPolygon convex_hull(const std::vector<Point2>& points);

// Area of the intersection of two convex polygons (Sutherland-Hodgman clip).
double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b);

// Shoelace area of an arbitrary closed vertex cycle (positive when ccw).
double signed_area(const std::vector<Point2>& cycle);

// Deterministic interior samples, roughly uniform: area-weighted triangle-fan
// sampling pulled slightly toward the centroid so results are strictly
// interior. rng_state seeds a small xorshift generator.
std::vector<Point2> sample_interior(const ConvexPolygon& poly, int count,
                                    unsigned long long seed);

}  // namespace nnv::geom
