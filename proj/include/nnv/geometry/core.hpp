#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace nnv::geom {

// Shared numeric tolerances. Coordinates are meters; kCoordTol is the absolute
// snapping/comparison tolerance used throughout the geometry stage.
inline constexpr double kCoordTol = 1e-9;
// Minimum distance for a ray hit to count; hits at the ray origin are ignored.
inline constexpr double kMinHitDistance = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

inline bool approx_equal(Point2 a, Point2 b, double tol = kCoordTol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

inline bool finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Positive-length line segment.
struct Segment {
    Point2 p;
    Point2 q;
};

inline double length(const Segment& s) { return distance(s.p, s.q); }

// Unit direction for a heading angle. Components within 1e-15 of zero are
// snapped to exact zero so that axis-aligned lasers produce exact axis
// directions (cos(pi/2) etc. are not exactly zero in IEEE arithmetic).
Point2 direction_from_angle(double angle);

// Wraps an angle into [0, 2*pi).
double normalize_angle(double angle);

// Distance from point p to the closed segment s.
double point_segment_distance(Point2 p, const Segment& s);

}  // namespace nnv::geom
