#include <doctest.h>

#include <algorithm>
#include <set>

#include "nnv/geometry/subdivision.hpp"
#include "nnv/geometry/sweep.hpp"
#include "oracles.hpp"

using namespace nnv;
using geom::Point2;
using geom::Segment;

namespace {

// Compares sweep output to the naive all-pairs oracle as point sets with
// incident ids, tolerance 1e-9.
void check_against_oracle(const std::vector<Segment>& segs) {
    auto sweep = geom::plane_sweep_intersections(segs);
    auto naive = oracles::naive_pairwise_intersections(segs);

    REQUIRE(sweep.size() == naive.size());
    for (const auto& got : sweep) {
        bool matched = false;
        for (const auto& want : naive) {
            if (std::abs(got.point.x - want.p.x) <= 2e-9 &&
                std::abs(got.point.y - want.p.y) <= 2e-9) {
                CHECK(got.segments == want.ids);
                matched = true;
                break;
            }
        }
        CHECK(matched);
    }
}

}  // namespace

TEST_CASE("sweep reports an X crossing once") {
    std::vector<Segment> segs{{{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}};
    auto out = geom::plane_sweep_intersections(segs);
    REQUIRE(out.size() == 1);
    CHECK(out[0].point.x == doctest::Approx(1.0));
    CHECK(out[0].point.y == doctest::Approx(1.0));
    CHECK(out[0].segments == std::vector<int>{0, 1});
}

TEST_CASE("sweep reports shared endpoints") {
    std::vector<Segment> segs{{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}};
    auto out = geom::plane_sweep_intersections(segs);
    REQUIRE(out.size() == 1);
    CHECK(out[0].point.x == doctest::Approx(1.0));
    CHECK(out[0].point.y == doctest::Approx(0.0));
    CHECK(out[0].segments == std::vector<int>{0, 1});
}

TEST_CASE("sweep output is ordered by sweep order") {
    std::vector<Segment> segs{
        {{0, 0}, {4, 4}}, {{0, 4}, {4, 0}}, {{0, 3}, {4, 3}}, {{1, 0}, {1, 4}}};
    auto out = geom::plane_sweep_intersections(segs);
    for (size_t i = 1; i < out.size(); ++i) {
        bool ordered = out[i - 1].point.y > out[i].point.y ||
                       (out[i - 1].point.y == out[i].point.y &&
                        out[i - 1].point.x < out[i].point.x);
        CHECK(ordered);
    }
}

TEST_CASE("sweep handles grids with many collinear events") {
    std::vector<Segment> segs;
    for (int i = 0; i <= 4; ++i) {
        segs.push_back({{static_cast<double>(i), 0}, {static_cast<double>(i), 4}});
        segs.push_back({{0, static_cast<double>(i)}, {4, static_cast<double>(i)}});
    }
    auto out = geom::plane_sweep_intersections(segs);
    CHECK(out.size() == 25);
    check_against_oracle(segs);
}

TEST_CASE("sweep equals naive oracle on random instances") {
    for (unsigned long long seed = 1; seed <= 30; ++seed) {
        check_against_oracle(oracles::random_segments(50, seed));
    }
}

TEST_CASE("sweep equals naive oracle on axis-heavy instances") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 10; ++round) {
        std::vector<Segment> segs;
        for (int i = 0; i < 30; ++i) {
            double a = std::floor(oracles::unit(rng) * 8);
            double b = std::floor(oracles::unit(rng) * 8);
            double c = std::floor(oracles::unit(rng) * 8);
            if (i % 3 == 0) {
                if (a == c) c += 1.0;
                segs.push_back({{std::min(a, c), b}, {std::max(a, c) + 1, b}});
            } else if (i % 3 == 1) {
                if (b == c) c += 1.0;
                segs.push_back({{a, std::min(b, c)}, {a, std::max(b, c) + 1}});
            } else {
                segs.push_back({{a, b}, {a + 3, b + 3}});
            }
        }
        check_against_oracle(segs);
    }
}

TEST_CASE("subdivision splits at crossings") {
    std::vector<Segment> segs{{{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}};
    auto sub = geom::build_planar_subdivision(segs);
    CHECK(sub.nodes.size() == 5);
    CHECK(sub.edges.size() == 4);
}

TEST_CASE("subdivision of a plain square") {
    std::vector<Segment> segs{
        {{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}};
    auto sub = geom::build_planar_subdivision(segs);
    CHECK(sub.nodes.size() == 4);
    CHECK(sub.edges.size() == 4);
    auto faces = geom::extract_faces(sub);
    CHECK(faces.size() == 1);
}

TEST_CASE("faces of a square with a chord") {
    std::vector<Segment> segs{{{0, 0}, {1, 0}},
                              {{1, 0}, {1, 1}},
                              {{1, 1}, {0, 1}},
                              {{0, 1}, {0, 0}},
                              {{0.5, 0}, {0.5, 1}}};
    auto sub = geom::build_planar_subdivision(segs);
    auto faces = geom::extract_faces(sub);
    CHECK(faces.size() == 2);
}

TEST_CASE("faces of a 2x2 grid of unit squares") {
    std::vector<Segment> segs;
    for (int i = 0; i <= 2; ++i) {
        segs.push_back({{static_cast<double>(i), 0}, {static_cast<double>(i), 2}});
        segs.push_back({{0, static_cast<double>(i)}, {2, static_cast<double>(i)}});
    }
    auto sub = geom::build_planar_subdivision(segs);
    auto faces = geom::extract_faces(sub);
    CHECK(faces.size() == 4);
}

TEST_CASE("subdivision has no crossing edges (oracle check)") {
    for (unsigned long long seed = 100; seed < 110; ++seed) {
        auto segs = oracles::random_segments(40, seed);
        auto sub = geom::build_planar_subdivision(segs);
        std::vector<Segment> edge_segs;
        for (auto [a, b] : sub.edges) {
            edge_segs.push_back({sub.nodes[a], sub.nodes[b]});
        }
        // Any intersection between two subdivision edges must be a shared
        // node, i.e. within tolerance of both segment endpoints.
        auto points = oracles::naive_pairwise_intersections(edge_segs);
        for (const auto& ip : points) {
            for (int id : ip.ids) {
                bool at_endpoint =
                    geom::distance(ip.p, edge_segs[id].p) <= 3e-9 ||
                    geom::distance(ip.p, edge_segs[id].q) <= 3e-9;
                CHECK(at_endpoint);
            }
        }
    }
}

TEST_CASE("Euler formula holds on connected subdivisions") {
    // Connected instances: a grid plus diagonals.
    std::vector<Segment> segs;
    for (int i = 0; i <= 3; ++i) {
        segs.push_back({{static_cast<double>(i), 0}, {static_cast<double>(i), 3}});
        segs.push_back({{0, static_cast<double>(i)}, {3, static_cast<double>(i)}});
    }
    segs.push_back({{0, 0}, {3, 3}});
    auto sub = geom::build_planar_subdivision(segs);
    auto faces = geom::extract_faces(sub);
    int V = static_cast<int>(sub.nodes.size());
    int E = static_cast<int>(sub.edges.size());
    int F = static_cast<int>(faces.size()) + 1;  // plus the unbounded face
    CHECK(V - E + F == 2);
}
