#include <catch2/catch_amalgamated.hpp>

#include <chrono>

#include "cdd/neighbors.hpp"
#include "cdd/pointcloud.hpp"
#include "cdd/rng.hpp"

namespace {

cdd::PointCloud random_cloud(std::size_t n, cdd::SplitMix64& rng, double scale = 1.0) {
    cdd::PointCloud pc;
    pc.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pc.points.push_back({scale * (2.0 * rng.uniform() - 1.0),
                             scale * (2.0 * rng.uniform() - 1.0),
                             scale * (2.0 * rng.uniform() - 1.0)});
    }
    return pc;
}

}  // namespace

TEST_CASE("brute-force assignment matches hand enumeration", "[neighbors]") {
    cdd::PointCloud source, target;
    source.points = {{0.0, 0.0, 0.0}};
    target.points = {{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    const auto na = cdd::assign_brute(source, target);
    REQUIRE(na.forward.size() == 1);
    REQUIRE(na.backward.size() == 2);
    CHECK(na.forward[0].min_distance == 0.0);
    CHECK(na.forward[0].argmin_index == 1);
    CHECK(na.backward[0].min_distance == 1.0);
    CHECK(na.backward[0].argmin_index == 0);
    CHECK(na.backward[1].min_distance == 0.0);
    CHECK(na.backward[1].argmin_index == 0);
}

TEST_CASE("identical clouds map every point to itself", "[neighbors]") {
    cdd::SplitMix64 rng(5);
    const auto pc = random_cloud(64, rng);
    const auto na = cdd::assign_brute(pc, pc);
    for (std::size_t i = 0; i < pc.size(); ++i) {
        CHECK(na.forward[i].min_distance == 0.0);
        CHECK(na.forward[i].argmin_index == i);
        CHECK(na.backward[i].min_distance == 0.0);
        CHECK(na.backward[i].argmin_index == i);
    }
}

TEST_CASE("exact distance ties break to the smallest index", "[neighbors]") {
    cdd::PointCloud source, target;
    source.points = {{0.0, 0.0, 0.0}};
    target.points = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
    const auto brute = cdd::assign_brute(source, target);
    CHECK(brute.forward[0].argmin_index == 0);
    const auto kd = cdd::assign_kdtree(source, target);
    CHECK(kd.forward[0].argmin_index == 0);
}

TEST_CASE("kd-tree equals brute force on random instances", "[neighbors]") {
    cdd::SplitMix64 rng(99);
    for (std::size_t n : {1, 2, 3, 10, 100, 1000}) {
        for (std::size_t m : {1, 17, 1000}) {
            const auto source = random_cloud(n, rng);
            const auto target = random_cloud(m, rng);
            const auto brute = cdd::assign_brute(source, target);
            const auto kd = cdd::assign_kdtree(source, target);
            REQUIRE(kd.forward.size() == brute.forward.size());
            REQUIRE(kd.backward.size() == brute.backward.size());
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(kd.forward[i].min_distance == brute.forward[i].min_distance);
                REQUIRE(kd.forward[i].argmin_index == brute.forward[i].argmin_index);
            }
            for (std::size_t k = 0; k < m; ++k) {
                REQUIRE(kd.backward[k].min_distance == brute.backward[k].min_distance);
                REQUIRE(kd.backward[k].argmin_index == brute.backward[k].argmin_index);
            }
        }
    }
}

TEST_CASE("kd-tree equals brute force on clustered points", "[neighbors]") {
    // Tight clusters force deep tree descent with many near ties.
    cdd::SplitMix64 rng(7);
    cdd::PointCloud source, target;
    for (int c = 0; c < 8; ++c) {
        const cdd::Vec3 center{rng.uniform(), rng.uniform(), rng.uniform()};
        for (int i = 0; i < 50; ++i) {
            target.points.push_back({center.x + 1e-7 * rng.uniform(),
                                     center.y + 1e-7 * rng.uniform(),
                                     center.z + 1e-7 * rng.uniform()});
            source.points.push_back({center.x + 1e-7 * rng.uniform(),
                                     center.y + 1e-7 * rng.uniform(),
                                     center.z + 1e-7 * rng.uniform()});
        }
    }
    const auto brute = cdd::assign_brute(source, target);
    const auto kd = cdd::assign_kdtree(source, target);
    for (std::size_t i = 0; i < source.size(); ++i) {
        REQUIRE(kd.forward[i].min_distance == brute.forward[i].min_distance);
        REQUIRE(kd.forward[i].argmin_index == brute.forward[i].argmin_index);
    }
}

TEST_CASE("duplicated target points keep brute-force distances and a duplicate index",
          "[neighbors]") {
    cdd::SplitMix64 rng(3);
    auto target = random_cloud(40, rng);
    // duplicate the first ten points at the end
    for (int i = 0; i < 10; ++i) target.points.push_back(target.points[i]);
    const auto source = random_cloud(64, rng);
    const auto brute = cdd::assign_brute(source, target);
    const auto kd = cdd::assign_kdtree(source, target);
    for (std::size_t i = 0; i < source.size(); ++i) {
        REQUIRE(kd.forward[i].min_distance == brute.forward[i].min_distance);
        const auto& hit = target[kd.forward[i].argmin_index];
        const auto& want = target[brute.forward[i].argmin_index];
        CHECK(hit.x == want.x);
        CHECK(hit.y == want.y);
        CHECK(hit.z == want.z);
        CHECK(kd.forward[i].argmin_index == brute.forward[i].argmin_index);
    }
}

TEST_CASE("single-point clouds behave", "[neighbors]") {
    cdd::PointCloud a, b;
    a.points = {{0.25, -0.5, 1.0}};
    b.points = {{1.0, 1.0, 1.0}};
    const auto brute = cdd::assign_brute(a, b);
    const auto kd = cdd::assign_kdtree(a, b);
    CHECK(kd.forward[0].min_distance == brute.forward[0].min_distance);
    CHECK(kd.backward[0].min_distance == brute.backward[0].min_distance);
}

TEST_CASE("assignment rejects empty clouds", "[neighbors]") {
    cdd::PointCloud empty, ok;
    ok.points = {{0.0, 0.0, 0.0}};
    REQUIRE_THROWS_AS(cdd::assign_brute(empty, ok), std::invalid_argument);
    REQUIRE_THROWS_AS(cdd::assign_kdtree(ok, empty), std::invalid_argument);
}

TEST_CASE("kd-tree query throughput is sane at 16k points", "[neighbors]") {
    cdd::SplitMix64 rng(123);
    const auto source = random_cloud(16384, rng);
    const auto target = random_cloud(16384, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const auto na = cdd::assign_kdtree(source, target);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    REQUIRE(na.forward.size() == 16384);
    if (secs >= 1.0) {
        WARN("16k x 16k assignment took " << secs << " s (expected < 1 s on typical hardware)");
    }
    CHECK(secs < 5.0);  // generous guard so slow CI machines do not flake
}
