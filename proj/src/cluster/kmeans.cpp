#include "entrex/cluster/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "entrex/core/io.hpp"

namespace entrex::cluster {

using kernels::SparsePoint;

size_t infer_dim(const std::vector<SparsePoint>& points) {
    size_t dim = 0;
    for (const auto& p : points)
        if (!p.entries.empty())
            dim = std::max(dim, static_cast<size_t>(p.entries.back().first) + 1);
    return dim;
}

namespace {

void place_centroid(double* centroid, size_t dim, const SparsePoint& p) {
    for (size_t j = 0; j < dim; ++j) centroid[j] = 0.0;
    for (const auto& [idx, v] : p.entries) centroid[static_cast<size_t>(idx)] = v;
}

// Library distributions are implementation-defined; these keep seeded runs
// byte-stable across toolchains.
size_t uniform_index(std::mt19937_64& rng, size_t n) {
    return static_cast<size_t>(rng() % n);
}

double uniform_real(std::mt19937_64& rng, double hi) {
    return (static_cast<double>(rng() >> 11) * 0x1.0p-53) * hi;
}

// k-means++: D^2-weighted seeding from a fixed-seed generator.
std::vector<double> seed_centroids(const std::vector<SparsePoint>& points, size_t k, size_t dim,
                                   std::mt19937_64& rng) {
    const size_t n = points.size();
    std::vector<double> centroids(k * dim, 0.0);
    std::vector<double> best_d2(n, std::numeric_limits<double>::infinity());

    place_centroid(centroids.data(), dim, points[uniform_index(rng, n)]);

    for (size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double d2 =
                kernels::point_centroid_dist2(points[i], centroids.data() + (c - 1) * dim, dim);
            best_d2[i] = std::min(best_d2[i], d2);
            total += best_d2[i];
        }
        size_t pick = 0;
        if (total > 0.0) {
            const double r = uniform_real(rng, total);
            double acc = 0.0;
            pick = n - 1;
            for (size_t i = 0; i < n; ++i) {
                acc += best_d2[i];
                if (acc >= r) {
                    pick = i;
                    break;
                }
            }
        } else {
            // All points coincide with chosen centroids; any point works.
            pick = c % n;
        }
        place_centroid(centroids.data() + c * dim, dim, points[pick]);
    }
    return centroids;
}

}  // namespace

KmeansResult kmeans(const std::vector<SparsePoint>& points, size_t k, uint64_t seed, int max_iter,
                    double tol, size_t dim) {
    const size_t n = points.size();
    if (k == 0 || k > n) throw ConfigError("kmeans: k must satisfy 1 <= k <= point count");
    if (dim == 0) dim = std::max<size_t>(infer_dim(points), 1);

    std::mt19937_64 rng(seed);
    KmeansResult res;
    res.k = k;
    res.dim = dim;
    res.centroids = seed_centroids(points, k, dim, rng);

    std::vector<double> dist2;
    std::vector<int> counts;
    for (int iter = 0; iter < max_iter; ++iter) {
        kernels::assign_points(points, res.centroids, k, dim, res.assignment, dist2);
        double wcss = 0.0;
        for (const double d : dist2) wcss += d;
        res.wcss = wcss;
        res.wcss_trace.push_back(wcss);

        std::vector<double> next = res.centroids;
        kernels::update_centroids(points, res.assignment, k, dim, next, counts);

        // Reseed empty clusters to the farthest point from its centroid;
        // each empty cluster takes the next-farthest unused point.
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            if (dist2[a] != dist2[b]) return dist2[a] > dist2[b];
            return a < b;
        });
        size_t next_far = 0;
        for (size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            if (next_far < n) {
                place_centroid(next.data() + c * dim, dim, points[order[next_far]]);
                ++next_far;
            }
        }

        double move2 = 0.0;
        for (size_t c = 0; c < k; ++c) {
            double m = 0.0;
            for (size_t j = 0; j < dim; ++j) {
                const double d = next[c * dim + j] - res.centroids[c * dim + j];
                m += d * d;
            }
            move2 = std::max(move2, m);
        }
        res.centroids = std::move(next);
        if (std::sqrt(move2) < tol) break;
    }

    // Final assignment against the final centroids.
    kernels::assign_points(points, res.centroids, k, dim, res.assignment, dist2);
    double wcss = 0.0;
    for (const double d : dist2) wcss += d;
    res.wcss = wcss;
    res.wcss_trace.push_back(wcss);
    return res;
}

}  // namespace entrex::cluster
