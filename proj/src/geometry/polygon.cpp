#include "nnv/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nnv/errors.hpp"
#include "nnv/geometry/predicates.hpp"

namespace nnv::geom {

namespace {

// Uniform double in [0,1) with pinned bit mapping.
double next_unit(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

std::vector<Point2> merge_collinear(std::vector<Point2> v) {
    if (v.size() < 3) return v;
    std::vector<Point2> out;
    int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        Point2 prev = v[(i + n - 1) % n];
        Point2 cur = v[i];
        Point2 next = v[(i + 1) % n];
        if (orientation(prev, cur, next) != 0) out.push_back(cur);
    }
    return out;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point2> vertices) {
    for (Point2 p : vertices) {
        if (!finite(p)) throw DegenerateInput("polygon vertex is not finite");
    }
    verts_ = merge_collinear(std::move(vertices));
    int n = static_cast<int>(verts_.size());
    if (n < 3) throw DegenerateInput("polygon needs >=3 non-collinear vertices");
    for (int i = 0; i < n; ++i) {
        if (approx_equal(verts_[i], verts_[(i + 1) % n], 0.0)) {
            throw DegenerateInput("polygon has repeated vertices");
        }
        int o = orientation(verts_[i], verts_[(i + 1) % n], verts_[(i + 2) % n]);
        if (o <= 0) {
            throw DegenerateInput(
                "polygon is not strictly convex counterclockwise");
        }
    }
}

double ConvexPolygon::area() const {
    return signed_area(verts_);
}

Point2 ConvexPolygon::centroid() const {
    // Area-weighted centroid of the polygon.
    double a2 = 0.0;
    double cx = 0.0, cy = 0.0;
    int n = size();
    for (int i = 0; i < n; ++i) {
        Point2 p = verts_[i], q = verts_[(i + 1) % n];
        double w = cross(p, q);
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

double ConvexPolygon::signed_distance(Point2 p) const {
    double best = std::numeric_limits<double>::infinity();
    int n = size();
    for (int i = 0; i < n; ++i) {
        Point2 a = verts_[i], b = verts_[(i + 1) % n];
        double c = cross(b - a, p - a);
        double len = distance(a, b);
        best = std::min(best, c / len);
    }
    return best;
}

ConvexPolygon convex_hull(const std::vector<Point2>& points) {
    std::vector<Point2> pts = points;
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a == b; }),
              pts.end());
    int n = static_cast<int>(pts.size());
    if (n < 3) throw DegenerateInput("convex hull of fewer than 3 points");

    // Andrew monotone chain; strict turns only, dropping collinear points.
    std::vector<Point2> hull(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    int lower = k + 1;
    for (int i = n - 2; i >= 0; --i) {
        while (k >= lower && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw DegenerateInput("all points are collinear");
    return ConvexPolygon(std::move(hull));
}

double signed_area(const std::vector<Point2>& cycle) {
    double a2 = 0.0;
    int n = static_cast<int>(cycle.size());
    for (int i = 0; i < n; ++i) {
        a2 += cross(cycle[i], cycle[(i + 1) % n]);
    }
    return 0.5 * a2;
}

double intersection_area(const ConvexPolygon& a, const ConvexPolygon& b) {
    // Clip a against each half-plane of b.
    std::vector<Point2> poly = a.vertices();
    int nb = b.size();
    for (int i = 0; i < nb && !poly.empty(); ++i) {
        Point2 e0 = b.vertex(i), e1 = b.vertex((i + 1) % nb);
        Point2 dir = e1 - e0;
        std::vector<Point2> next;
        int n = static_cast<int>(poly.size());
        for (int j = 0; j < n; ++j) {
            Point2 cur = poly[j];
            Point2 nxt = poly[(j + 1) % n];
            double dc = cross(dir, cur - e0);
            double dn = cross(dir, nxt - e0);
            if (dc >= 0.0) next.push_back(cur);
            if ((dc > 0.0 && dn < 0.0) || (dc < 0.0 && dn > 0.0)) {
                double t = dc / (dc - dn);
                next.push_back(cur + t * (nxt - cur));
            }
        }
        poly = std::move(next);
    }
    if (poly.size() < 3) return 0.0;
    return std::abs(signed_area(poly));
}

std::vector<Point2> sample_interior(const ConvexPolygon& poly, int count,
                                    unsigned long long seed) {
    std::mt19937_64 rng(seed);
    const auto& v = poly.vertices();
    int n = poly.size();
    Point2 c = poly.centroid();

    // Triangle fan around the centroid with area-proportional selection.
    std::vector<double> cum(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        total += std::abs(cross(v[i] - c, v[(i + 1) % n] - c)) * 0.5;
        cum[i] = total;
    }

    std::vector<Point2> out;
    out.reserve(count);
    for (int s = 0; s < count; ++s) {
        double pick = next_unit(rng) * total;
        int tri = static_cast<int>(
            std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
        if (tri >= n) tri = n - 1;
        double r1 = std::sqrt(next_unit(rng));
        double r2 = next_unit(rng);
        Point2 a = c, b = v[tri], d = v[(tri + 1) % n];
        Point2 p = (1.0 - r1) * a + (r1 * (1.0 - r2)) * b + (r1 * r2) * d;
        // Pull a hair toward the centroid so samples are strictly interior.
        p = p + 1e-9 * (c - p);
        out.push_back(p);
    }
    return out;
}

}  // namespace nnv::geom
