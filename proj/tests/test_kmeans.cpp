#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "entrex/cluster/kmeans.hpp"
#include "entrex/cluster/xmeans.hpp"
#include "entrex/core/io.hpp"
#include "test_util.hpp"

using namespace entrex;
using cluster::KmeansResult;
using cluster::XMeansConfig;
using kernels::SparsePoint;

namespace {

SparsePoint dense2(double x, double y) {
    SparsePoint p;
    p.entries = {{0, x}, {1, y}};
    return p;
}

}  // namespace

TEST_CASE("kmeans separates two well-separated pairs with WCSS 1.0") {
    const std::vector<SparsePoint> points = {dense2(0, 0), dense2(0, 1), dense2(10, 10),
                                             dense2(10, 11)};
    const KmeansResult res = cluster::kmeans(points, 2, 42);
    CHECK(res.wcss == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.assignment[0] == res.assignment[1]);
    CHECK(res.assignment[2] == res.assignment[3]);
    CHECK(res.assignment[0] != res.assignment[2]);
}

TEST_CASE("k equal to n gives singleton clusters and zero WCSS") {
    const std::vector<SparsePoint> points = {dense2(0, 0), dense2(3, 0), dense2(0, 3)};
    const KmeansResult res = cluster::kmeans(points, 3, 1);
    CHECK(res.wcss == doctest::Approx(0.0));
    std::set<int> distinct(res.assignment.begin(), res.assignment.end());
    CHECK(distinct.size() == 3);
}

TEST_CASE("identical points with k=2 collapse to one populated cluster") {
    const std::vector<SparsePoint> points = {dense2(1, 1), dense2(1, 1), dense2(1, 1)};
    const KmeansResult res = cluster::kmeans(points, 2, 9);
    CHECK(res.wcss == doctest::Approx(0.0));
    for (const int a : res.assignment) CHECK(a == res.assignment[0]);
}

TEST_CASE("k exceeding the point count is rejected") {
    const std::vector<SparsePoint> points = {dense2(0, 0)};
    CHECK_THROWS_AS(cluster::kmeans(points, 2, 0), ConfigError);
}

TEST_CASE("WCSS is non-increasing across Lloyd iterations") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<SparsePoint> points;
        for (int i = 0; i < 80; ++i)
            points.push_back(dense2(testutil::unit_real(rng) * 10.0,
                                    testutil::unit_real(rng) * 10.0));
        const KmeansResult res = cluster::kmeans(points, 5, rng());
        for (size_t i = 1; i < res.wcss_trace.size(); ++i)
            CHECK(res.wcss_trace[i] <= res.wcss_trace[i - 1] * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("kmeans is deterministic under a fixed seed") {
    std::mt19937_64 rng(8);
    std::vector<SparsePoint> points;
    for (int i = 0; i < 60; ++i)
        points.push_back(dense2(testutil::unit_real(rng) * 4, testutil::unit_real(rng) * 4));
    const auto a = cluster::kmeans(points, 4, 77);
    const auto b = cluster::kmeans(points, 4, 77);
    CHECK(a.assignment == b.assignment);
    CHECK(a.centroids == b.centroids);
    CHECK(a.wcss == b.wcss);
}

TEST_CASE("bic prefers the true structure") {
    std::mt19937_64 rng(11);
    SUBCASE("two tight separated blobs: split beats merged") {
        std::vector<int> labels;
        const auto points =
            testutil::gaussian_blobs({{0.0, 0.0}, {20.0, 0.0}}, 25, 1.0, rng, &labels);
        const std::vector<int> one(points.size(), 0);
        CHECK(cluster::bic(points, labels, 2, 2) > cluster::bic(points, one, 1, 2));
    }
    SUBCASE("single blob: merged beats an arbitrary split for most seeds") {
        int merged_wins = 0;
        for (int s = 0; s < 100; ++s) {
            std::mt19937_64 r2(static_cast<uint64_t>(s));
            const auto points = testutil::gaussian_blobs({{0.0, 0.0}}, 40, 1.0, r2);
            const auto split = cluster::kmeans(points, 2, static_cast<uint64_t>(s));
            const std::vector<int> one(points.size(), 0);
            if (cluster::bic(points, one, 1, 2) > cluster::bic(points, split.assignment, 2, 2))
                ++merged_wins;
        }
        CHECK(merged_wins >= 90);
    }
    SUBCASE("duplicate points only: +infinity sentinel") {
        const std::vector<SparsePoint> dups = {dense2(1, 1), dense2(1, 1), dense2(1, 1)};
        const std::vector<int> one(dups.size(), 0);
        CHECK(std::isinf(cluster::bic(dups, one, 1, 2)));
    }
}

TEST_CASE("xmeans recovers three separated blobs") {
    int exact = 0;
    for (int s = 0; s < 100; ++s) {
        std::mt19937_64 rng(1000 + static_cast<uint64_t>(s));
        std::vector<int> truth;
        const auto points = testutil::gaussian_blobs(
            {{0.0, 0.0}, {30.0, 0.0}, {0.0, 30.0}}, 30, 1.0, rng, &truth);
        XMeansConfig cfg;
        cfg.seed = static_cast<uint64_t>(s);
        const auto partition = cluster::xmeans(points, cfg);
        if (partition.size() != 3) continue;
        const auto labels = testutil::partition_labels(partition, points.size());
        if (testutil::adjusted_rand_index(labels, truth) >= 0.99) ++exact;
    }
    CHECK(exact >= 95);
}

TEST_CASE("xmeans edge behavior") {
    SUBCASE("one tight blob stops at k_min") {
        std::mt19937_64 rng(3);
        const auto points = testutil::gaussian_blobs({{0.0, 0.0}}, 40, 0.5, rng);
        XMeansConfig cfg;
        const auto partition = cluster::xmeans(points, cfg);
        CHECK(partition.size() <= 3);  // k_min plus at most stray accepted splits
        CHECK(partition.size() >= 1);
    }
    SUBCASE("two points stay within the k_min bound") {
        const std::vector<SparsePoint> points = {dense2(0, 0), dense2(5, 5)};
        const auto partition = cluster::xmeans(points, {});
        CHECK(partition.size() <= 2);
        size_t total = 0;
        for (const auto& c : partition) total += c.size();
        CHECK(total == 2);
    }
    SUBCASE("single point passes through") {
        const std::vector<SparsePoint> points = {dense2(0, 0)};
        const auto partition = cluster::xmeans(points, {});
        REQUIRE(partition.size() == 1);
        CHECK(partition[0] == std::vector<int>{0});
    }
    SUBCASE("k_max caps the cluster count and output partitions the input") {
        std::mt19937_64 rng(5);
        std::vector<int> truth;
        const auto points = testutil::gaussian_blobs(
            {{0.0, 0.0}, {40.0, 0.0}, {0.0, 40.0}, {40.0, 40.0}, {20.0, 80.0}}, 12, 1.0, rng,
            &truth);
        XMeansConfig cfg;
        cfg.k_max = 4;
        const auto partition = cluster::xmeans(points, cfg);
        CHECK(static_cast<int>(partition.size()) <= 4);
        std::vector<bool> seen(points.size(), false);
        for (const auto& c : partition)
            for (const int i : c) {
                CHECK_FALSE(seen[static_cast<size_t>(i)]);
                seen[static_cast<size_t>(i)] = true;
            }
        CHECK(std::count(seen.begin(), seen.end(), true) == static_cast<long>(points.size()));
    }
}

TEST_CASE("xmeans is deterministic under a fixed seed") {
    std::mt19937_64 rng(17);
    const auto points = testutil::gaussian_blobs({{0.0, 0.0}, {15.0, 0.0}}, 20, 1.0, rng);
    XMeansConfig cfg;
    cfg.seed = 5;
    CHECK(cluster::xmeans(points, cfg) == cluster::xmeans(points, cfg));
}
