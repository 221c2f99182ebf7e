#include "entrex/kernels/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <limits>

namespace entrex::kernels {

namespace {
int g_max_threads = 0;  // 0 = runtime default
}

int max_threads() {
    return g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
}

void set_max_threads(int n) {
    g_max_threads = n;
}

double sparse_distance(const SparsePoint& a, const SparsePoint& b) {
    double sum = 0.0;
    size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        const auto& [ia, va] = a.entries[i];
        const auto& [ib, vb] = b.entries[j];
        if (ia == ib) {
            const double d = va - vb;
            sum += d * d;
            ++i;
            ++j;
        } else if (ia < ib) {
            sum += va * va;
            ++i;
        } else {
            sum += vb * vb;
            ++j;
        }
    }
    for (; i < a.entries.size(); ++i) sum += a.entries[i].second * a.entries[i].second;
    for (; j < b.entries.size(); ++j) sum += b.entries[j].second * b.entries[j].second;
    return std::sqrt(sum);
}

double point_centroid_dist2(const SparsePoint& p, const double* centroid, size_t dim) {
    double sum = 0.0;
    size_t next = 0;
    for (const auto& [idx, v] : p.entries) {
        const auto u = static_cast<size_t>(idx);
        for (size_t j = next; j < u; ++j) sum += centroid[j] * centroid[j];
        const double d = v - centroid[u];
        sum += d * d;
        next = u + 1;
    }
    for (size_t j = next; j < dim; ++j) sum += centroid[j] * centroid[j];
    return sum;
}

size_t condensed_index(size_t i, size_t j, size_t n) {
    // i < j required
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<double> pairwise_distances_serial(std::span<const SparsePoint> points) {
    const size_t n = points.size();
    std::vector<double> out(n * (n - 1) / 2);
    for (size_t i = 0; i + 1 < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            out[condensed_index(i, j, n)] = sparse_distance(points[i], points[j]);
    return out;
}

std::vector<double> pairwise_distances(std::span<const SparsePoint> points) {
    const size_t n = points.size();
    std::vector<double> out(n * (n - 1) / 2);
    const auto nn = static_cast<int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(max_threads())
    for (int64_t i = 0; i < nn - 1; ++i) {
        const size_t base = condensed_index(static_cast<size_t>(i), static_cast<size_t>(i) + 1, n);
        for (size_t j = static_cast<size_t>(i) + 1; j < n; ++j)
            out[base + (j - i - 1)] = sparse_distance(points[static_cast<size_t>(i)], points[j]);
    }
    return out;
}

namespace {

inline void assign_one(const SparsePoint& p, std::span<const double> centroids, size_t k,
                       size_t dim, int& a, double& d2) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < k; ++c) {
        const double d = point_centroid_dist2(p, centroids.data() + c * dim, dim);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    a = best;
    d2 = best_d;
}

inline void update_one_cluster(std::span<const SparsePoint> points, std::span<const int> assignment,
                               int c, size_t dim, double* centroid, int& count) {
    for (size_t j = 0; j < dim; ++j) centroid[j] = 0.0;
    count = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        if (assignment[i] != c) continue;
        ++count;
        for (const auto& [idx, v] : points[i].entries) centroid[static_cast<size_t>(idx)] += v;
    }
    if (count > 0)
        for (size_t j = 0; j < dim; ++j) centroid[j] /= static_cast<double>(count);
}

}  // namespace

void assign_points_serial(std::span<const SparsePoint> points, std::span<const double> centroids,
                          size_t k, size_t dim, std::vector<int>& assignment,
                          std::vector<double>& dist2) {
    assignment.resize(points.size());
    dist2.resize(points.size());
    for (size_t i = 0; i < points.size(); ++i)
        assign_one(points[i], centroids, k, dim, assignment[i], dist2[i]);
}

void assign_points(std::span<const SparsePoint> points, std::span<const double> centroids,
                   size_t k, size_t dim, std::vector<int>& assignment, std::vector<double>& dist2) {
    assignment.resize(points.size());
    dist2.resize(points.size());
    const auto n = static_cast<int64_t>(points.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int64_t i = 0; i < n; ++i)
        assign_one(points[static_cast<size_t>(i)], centroids, k, dim,
                   assignment[static_cast<size_t>(i)], dist2[static_cast<size_t>(i)]);
}

void update_centroids_serial(std::span<const SparsePoint> points, std::span<const int> assignment,
                             size_t k, size_t dim, std::vector<double>& centroids,
                             std::vector<int>& counts) {
    centroids.assign(k * dim, 0.0);
    counts.assign(k, 0);
    for (size_t c = 0; c < k; ++c)
        update_one_cluster(points, assignment, static_cast<int>(c), dim,
                           centroids.data() + c * dim, counts[c]);
}

void update_centroids(std::span<const SparsePoint> points, std::span<const int> assignment,
                      size_t k, size_t dim, std::vector<double>& centroids,
                      std::vector<int>& counts) {
    centroids.assign(k * dim, 0.0);
    counts.assign(k, 0);
    const auto kk = static_cast<int64_t>(k);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (int64_t c = 0; c < kk; ++c)
        update_one_cluster(points, assignment, static_cast<int>(c), dim,
                           centroids.data() + static_cast<size_t>(c) * dim,
                           counts[static_cast<size_t>(c)]);
}

}  // namespace entrex::kernels
