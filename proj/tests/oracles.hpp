// Test-only oracles: independent, straightforward implementations used to
// validate the production code paths. Nothing here may call into the code it
// checks beyond shared primitive types.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "nnv/geometry/polygon.hpp"
#include "nnv/geometry/predicates.hpp"
#include "nnv/geometry/workspace.hpp"
#include "nnv/network/network.hpp"
#include "nnv/smc/smc.hpp"

namespace oracles {

using nnv::geom::ConvexPolygon;
using nnv::geom::Point2;
using nnv::geom::Segment;

inline double unit(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Gift-wrapping convex hull (Jarvis march).
inline std::vector<Point2> gift_wrap_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a == b; }),
              pts.end());
    Point2 start = pts[0];
    std::vector<Point2> hull;
    Point2 cur = start;
    do {
        hull.push_back(cur);
        Point2 cand = pts[0] == cur ? pts[1] : pts[0];
        for (Point2 p : pts) {
            if (p == cur) continue;
            int o = nnv::geom::orientation(cur, cand, p);
            if (o < 0) {
                cand = p;
            } else if (o == 0) {
                // Keep the farthest collinear point so collinear interiors
                // are skipped.
                if (nnv::geom::distance(cur, p) >
                    nnv::geom::distance(cur, cand)) {
                    cand = p;
                }
            }
        }
        cur = cand;
    } while (!(cur == start) && hull.size() <= pts.size());
    return hull;  // counterclockwise, collinear points dropped
}

// ---------------------------------------------------------------------------
// Naive all-pairs segment intersections with the same reporting semantics as
// the sweep: points merged within tol, each with all incident segment ids.
struct NaivePoint {
    Point2 p;
    std::vector<int> ids;
};

inline std::vector<NaivePoint> naive_pairwise_intersections(
    const std::vector<Segment>& segs, double tol = 1e-9) {
    using nnv::geom::cross;
    using nnv::geom::on_segment;
    using nnv::geom::orientation;
    std::vector<NaivePoint> found;

    auto record = [&](Point2 p, int i, int j) {
        for (auto& np : found) {
            if (std::abs(np.p.x - p.x) <= tol && std::abs(np.p.y - p.y) <= tol) {
                np.ids.push_back(i);
                np.ids.push_back(j);
                return;
            }
        }
        found.push_back({p, {i, j}});
    };

    int n = static_cast<int>(segs.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Segment& a = segs[i];
            const Segment& b = segs[j];
            int d1 = orientation(b.p, b.q, a.p);
            int d2 = orientation(b.p, b.q, a.q);
            int d3 = orientation(a.p, a.q, b.p);
            int d4 = orientation(a.p, a.q, b.q);
            if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
                // Collinear: report overlap interval endpoints.
                Point2 d = a.q - a.p;
                double len2 = nnv::geom::dot(d, d);
                double t0 = nnv::geom::dot(b.p - a.p, d) / len2;
                double t1 = nnv::geom::dot(b.q - a.p, d) / len2;
                Point2 e0 = b.p, e1 = b.q;
                if (t0 > t1) {
                    std::swap(t0, t1);
                    std::swap(e0, e1);
                }
                double lo = std::max(t0, 0.0), hi = std::min(t1, 1.0);
                if (lo > hi) continue;
                Point2 plo = (lo == t0) ? e0 : a.p;
                Point2 phi = (hi == t1) ? e1 : a.q;
                record(plo, i, j);
                if (!(plo == phi)) record(phi, i, j);
                continue;
            }
            if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 &&
                d2 != 0 && d3 != 0 && d4 != 0) {
                Point2 r = a.q - a.p;
                Point2 s = b.q - b.p;
                double t = cross(b.p - a.p, s) / cross(r, s);
                record(a.p + t * r, i, j);
                continue;
            }
            if (d1 == 0 && on_segment(b.p, b.q, a.p)) record(a.p, i, j);
            else if (d2 == 0 && on_segment(b.p, b.q, a.q)) record(a.q, i, j);
            else if (d3 == 0 && on_segment(a.p, a.q, b.p)) record(b.p, i, j);
            else if (d4 == 0 && on_segment(a.p, a.q, b.q)) record(b.q, i, j);
        }
    }
    for (auto& np : found) {
        std::sort(np.ids.begin(), np.ids.end());
        np.ids.erase(std::unique(np.ids.begin(), np.ids.end()), np.ids.end());
    }
    return found;
}

// ---------------------------------------------------------------------------
// Random geometry instances.
inline std::vector<Segment> random_segments(int count, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<Segment> out;
    while (static_cast<int>(out.size()) < count) {
        Point2 p{unit(rng) * 10.0, unit(rng) * 10.0};
        Point2 q{unit(rng) * 10.0, unit(rng) * 10.0};
        if (nnv::geom::distance(p, q) > 1e-3) out.push_back({p, q});
    }
    return out;
}

// Random convex workspace: convex-hull boundary with at most max_vertices
// vertices and up to max_obstacles small convex obstacles, disjoint and
// strictly inside the boundary.
inline nnv::geom::WorkspaceSpec random_workspace(unsigned long long seed,
                                                 int max_vertices = 12,
                                                 int max_obstacles = 3) {
    std::mt19937_64 rng(seed);
    while (true) {
        std::vector<Point2> cloud;
        int probes = 3 + static_cast<int>(unit(rng) * max_vertices * 2);
        for (int i = 0; i < probes; ++i) {
            double angle = unit(rng) * 2.0 * std::acos(-1.0);
            double radius = 6.0 + unit(rng) * 4.0;
            cloud.push_back({radius * std::cos(angle), radius * std::sin(angle)});
        }
        ConvexPolygon boundary;
        try {
            boundary = nnv::geom::convex_hull(cloud);
        } catch (...) {
            continue;
        }
        if (boundary.size() > max_vertices) continue;

        int want = static_cast<int>(unit(rng) * (max_obstacles + 1));
        std::vector<ConvexPolygon> obstacles;
        for (int attempt = 0; attempt < 50 && static_cast<int>(obstacles.size()) < want;
             ++attempt) {
            Point2 center{(unit(rng) - 0.5) * 6.0, (unit(rng) - 0.5) * 6.0};
            if (!boundary.strictly_contains(center, 2.0)) continue;
            std::vector<Point2> pts;
            int k = 3 + static_cast<int>(unit(rng) * 3);
            double rad = 0.4 + unit(rng) * 0.9;
            for (int i = 0; i < k + 2; ++i) {
                double angle = unit(rng) * 2.0 * std::acos(-1.0);
                pts.push_back({center.x + rad * std::cos(angle),
                               center.y + rad * std::sin(angle)});
            }
            ConvexPolygon cand;
            try {
                cand = nnv::geom::convex_hull(pts);
            } catch (...) {
                continue;
            }
            bool ok = true;
            for (Point2 v : cand.vertices()) {
                if (!boundary.strictly_contains(v, 0.3)) ok = false;
            }
            for (const auto& other : obstacles) {
                for (Point2 v : cand.vertices()) {
                    if (other.contains(v, 0.3)) ok = false;
                }
                for (Point2 v : other.vertices()) {
                    if (cand.contains(v, 0.3)) ok = false;
                }
                if (nnv::geom::distance(other.centroid(), cand.centroid()) <
                    2.5) {
                    ok = false;
                }
            }
            if (ok) obstacles.push_back(cand);
        }
        try {
            return nnv::geom::WorkspaceSpec(boundary, obstacles);
        } catch (...) {
            continue;
        }
    }
}

// ---------------------------------------------------------------------------
// Independent forward pass (plain loops, no shared code with nn::forward).
inline std::vector<double> naive_forward(const nnv::nn::NeuralNetwork& net,
                                         const std::vector<double>& input) {
    std::vector<double> h = input;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        const auto& layer = net.layers[l];
        std::vector<double> next(layer.W.rows, 0.0);
        for (int r = 0; r < layer.W.rows; ++r) {
            double acc = layer.w[r];
            for (int c = 0; c < layer.W.cols; ++c) {
                acc += layer.W.at(r, c) * h[c];
            }
            next[r] = acc;
        }
        if (l + 1 < net.layers.size()) {
            for (double& v : next) v = v > 0.0 ? v : 0.0;
        }
        h = std::move(next);
    }
    return h;
}

// Random small ReLU network with the given layer widths.
inline nnv::nn::NeuralNetwork random_network(int input_dim,
                                             std::vector<int> hidden,
                                             int output_dim,
                                             unsigned long long seed,
                                             double weight_scale = 1.0) {
    std::mt19937_64 rng(seed);
    auto w = [&]() { return (unit(rng) * 2.0 - 1.0) * weight_scale; };
    nnv::nn::NeuralNetwork net;
    net.input_dim = input_dim;
    net.output_dim = output_dim;
    int prev = input_dim;
    for (int width : hidden) {
        nnv::nn::Layer layer;
        layer.W = nnv::nn::Matrix(width, prev);
        for (double& v : layer.W.data) v = w();
        for (int i = 0; i < width; ++i) layer.w.push_back(w());
        net.layers.push_back(std::move(layer));
        prev = width;
    }
    nnv::nn::Layer out;
    out.W = nnv::nn::Matrix(output_dim, prev);
    for (double& v : out.W.data) v = w();
    for (int i = 0; i < output_dim; ++i) out.w.push_back(w());
    net.layers.push_back(std::move(out));
    return net;
}

// ---------------------------------------------------------------------------
// Exhaustive phase enumeration: LP-checks every full assignment.
struct ExhaustiveResult {
    std::vector<std::vector<bool>> feasible;  // enumeration order: binary count
    bool any_feasible = false;
};

inline ExhaustiveResult exhaustive_phases(const nnv::smc::MonotoneSmcProblem& p,
                                          double tol = 1e-7) {
    ExhaustiveResult out;
    int M = p.bool_count;
    for (unsigned long long mask = 0; mask < (1ULL << M); ++mask) {
        std::vector<bool> phases(M);
        for (int v = 0; v < M; ++v) phases[v] = (mask >> v) & 1ULL;
        auto lits = p.phase_literals(phases);
        nnv::smc::LpResult r =
            nnv::smc::check_literals(p.base, lits, p.guarded, tol);
        if (r.feasible()) {
            out.feasible.push_back(phases);
            out.any_feasible = true;
        }
    }
    return out;
}

}  // namespace oracles
