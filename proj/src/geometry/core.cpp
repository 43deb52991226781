#include "nnv/geometry/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nnv::geom {

Point2 direction_from_angle(double angle) {
    double c = std::cos(angle);
    double s = std::sin(angle);
    if (std::abs(c) < 1e-15) {
        c = 0.0;
        s = (s > 0.0) ? 1.0 : -1.0;
    }
    if (std::abs(s) < 1e-15) {
        s = 0.0;
        c = (c > 0.0) ? 1.0 : -1.0;
    }
    return {c, s};
}

double normalize_angle(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a = 0.0;
    return a;
}

double point_segment_distance(Point2 p, const Segment& s) {
    Point2 d = s.q - s.p;
    double len2 = dot(d, d);
    if (len2 == 0.0) return distance(p, s.p);
    double t = dot(p - s.p, d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.p + t * d);
}

}  // namespace nnv::geom
