#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nnv/errors.hpp"
#include "nnv/geometry/partition.hpp"
#include "nnv/geometry/ray.hpp"
#include "oracles.hpp"

using namespace nnv;
using geom::ConvexPolygon;
using geom::LidarSpec;
using geom::PartitionResult;
using geom::Point2;

namespace {

geom::WorkspaceSpec box_workspace() {
    ConvexPolygon boundary({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    ConvexPolygon obstacle({{1, 1}, {2, 1}, {2, 2}, {1, 2}});
    return geom::WorkspaceSpec(boundary, {obstacle});
}

// The Proposition-1 style check: every laser hits one edge from everywhere in
// the region.
bool imaging_adapted(const geom::WorkspaceSpec& w, const ConvexPolygon& region,
                     const std::vector<double>& angles, int samples,
                     unsigned long long seed) {
    auto pts = geom::sample_interior(region, samples, seed);
    for (double a : angles) {
        geom::EdgeId expect;
        bool first = true;
        for (Point2 p : pts) {
            auto hit = geom::first_hit_opt(p, a, w);
            if (!hit) return false;
            if (first) {
                expect = hit->edge;
                first = false;
            } else if (!(hit->edge == expect)) {
                return false;
            }
        }
    }
    return true;
}

void check_partition_invariants(const geom::WorkspaceSpec& w,
                                const PartitionResult& part) {
    // Coverage.
    double sum = 0.0;
    for (const auto& r : part.fine_regions) sum += r.area();
    double total = w.boundary().area();
    CHECK(std::abs(sum - total) <= 1e-9 * total);

    // Pairwise interior disjointness.
    for (size_t i = 0; i < part.fine_regions.size(); ++i) {
        for (size_t j = i + 1; j < part.fine_regions.size(); ++j) {
            double inter = geom::intersection_area(part.fine_regions[i],
                                                   part.fine_regions[j]);
            double lim = 1e-9 * std::min(part.fine_regions[i].area(),
                                         part.fine_regions[j].area());
            CHECK(inter <= lim + 1e-15);
        }
    }

    // Every fine region inside its aggregate.
    for (size_t i = 0; i < part.fine_regions.size(); ++i) {
        int a = part.fine_to_aggregate[i];
        REQUIRE(a >= 0);
        double own = part.fine_regions[i].area();
        double within = geom::intersection_area(part.fine_regions[i],
                                                part.aggregate_regions[a]);
        CHECK(within >= own * (1.0 - 1e-9));
    }
}

}  // namespace

TEST_CASE("box workspace partitions into the 3x3 grid") {
    geom::WorkspaceSpec w = box_workspace();
    LidarSpec lidar(4, 0.0, {1, 2, 3, 4});
    PartitionResult part = geom::wksp_partition(w, lidar);

    REQUIRE(part.fine_regions.size() == 9);
    CHECK(part.free_region_count() == 8);

    int obstacle_regions = 0;
    for (size_t i = 0; i < part.fine_regions.size(); ++i) {
        if (part.region_kind[i] == geom::RegionKind::obstacle_interior) {
            ++obstacle_regions;
            CHECK(part.fine_regions[i].area() == doctest::Approx(1.0));
            Point2 c = part.fine_regions[i].centroid();
            CHECK(c.x == doctest::Approx(1.5));
            CHECK(c.y == doctest::Approx(1.5));
        }
    }
    CHECK(obstacle_regions == 1);
    check_partition_invariants(w, part);

    // All primary: aggregates match fine regions.
    CHECK(part.aggregate_regions.size() == 9);
}

TEST_CASE("aggregate partition from one primary laser") {
    geom::WorkspaceSpec w = box_workspace();
    LidarSpec lidar(4, 0.0, {1});  // primary angle 0 only
    PartitionResult part = geom::wksp_partition(w, lidar);

    REQUIRE(part.fine_regions.size() == 9);
    // Horizontal slabs y in [0,1], [1,2], [2,4]; the middle slab is split by
    // the obstacle column.
    REQUIRE(part.aggregate_regions.size() == 5);
    double areas[5];
    for (int i = 0; i < 5; ++i) areas[i] = part.aggregate_regions[i].area();
    std::sort(areas, areas + 5);
    CHECK(areas[0] == doctest::Approx(1.0));  // obstacle or left strip
    CHECK(areas[1] == doctest::Approx(1.0));
    CHECK(areas[2] == doctest::Approx(2.0));  // right strip [2,4]x[1,2]
    CHECK(areas[3] == doctest::Approx(4.0));  // bottom slab
    CHECK(areas[4] == doctest::Approx(8.0));  // top slab
    check_partition_invariants(w, part);
}

TEST_CASE("empty obstacle list gives one region") {
    ConvexPolygon boundary({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    geom::WorkspaceSpec w(boundary, {});
    LidarSpec lidar(4, 0.0, {1, 2, 3, 4});
    PartitionResult part = geom::wksp_partition(w, lidar);
    CHECK(part.fine_regions.size() == 1);
    CHECK(part.fine_regions[0].area() == doctest::Approx(16.0));
    CHECK(part.aggregate_regions.size() == 1);
}

TEST_CASE("partition regions are imaging-adapted (sampling oracle)") {
    geom::WorkspaceSpec w = box_workspace();
    LidarSpec lidar(8, 0.0, {1, 3, 5, 7});
    PartitionResult part = geom::wksp_partition(w, lidar);
    check_partition_invariants(w, part);
    auto angles = lidar.angles();
    for (size_t i = 0; i < part.fine_regions.size(); ++i) {
        if (part.region_kind[i] != geom::RegionKind::free) continue;
        CHECK(imaging_adapted(w, part.fine_regions[i], angles, 40, 1000 + i));
    }
}

TEST_CASE("random workspaces stay imaging-adapted") {
    for (unsigned long long seed = 1; seed <= 6; ++seed) {
        auto w = oracles::random_workspace(seed);
        LidarSpec lidar(4, 0.3, {1, 2, 3, 4});
        PartitionResult part = geom::wksp_partition(w, lidar);
        check_partition_invariants(w, part);
        auto angles = lidar.angles();
        for (size_t i = 0; i < part.fine_regions.size(); ++i) {
            if (part.region_kind[i] != geom::RegionKind::free) continue;
            CHECK(imaging_adapted(w, part.fine_regions[i], angles, 25,
                                  7000 + seed * 100 + i));
        }
    }
}

TEST_CASE("lidar spec validation") {
    CHECK_THROWS_AS(LidarSpec(4, 0.0, {}), InputError);
    CHECK_THROWS_AS(LidarSpec(4, 0.0, {5}), InputError);
    LidarSpec ok(4, 0.25, {1, 3});
    CHECK(ok.angle(1) == doctest::Approx(0.25));
    CHECK(ok.angle(3) == doctest::Approx(0.25 + std::numbers::pi));
    CHECK(ok.primary_angles().size() == 2);
}
