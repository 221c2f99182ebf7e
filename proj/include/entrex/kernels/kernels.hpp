#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

// Data-parallel inner loops shared by the clustering and bucketing stages.
// Each kernel has a serial reference implementation (`*_serial`) and an
// OpenMP variant. The parallel variants compute every output slot
// independently with the same per-slot arithmetic as the serial code, so
// results are bit-identical for any thread count; the unit tests assert
// exact equality against the serial references.

namespace entrex::kernels {

// Sparse vector with entries sorted by dimension index.
struct SparsePoint {
    std::vector<std::pair<int32_t, double>> entries;
};

int max_threads();
void set_max_threads(int n);  // n <= 0 restores the hardware default

// Euclidean distance over the union of dimensions; absent entries read 0.
double sparse_distance(const SparsePoint& a, const SparsePoint& b);

// Squared distance between a sparse point and a dense centroid of width dim.
double point_centroid_dist2(const SparsePoint& p, const double* centroid, size_t dim);

// Condensed upper triangle of the pairwise distance matrix:
// out[condensed_index(i, j, n)] = d(p_i, p_j) for i < j.
size_t condensed_index(size_t i, size_t j, size_t n);
std::vector<double> pairwise_distances_serial(std::span<const SparsePoint> points);
std::vector<double> pairwise_distances(std::span<const SparsePoint> points);

// Nearest-centroid assignment; ties resolve to the lowest centroid index.
// centroids is row-major k x dim. dist2 receives the distance to the winner.
void assign_points_serial(std::span<const SparsePoint> points, std::span<const double> centroids,
                          size_t k, size_t dim, std::vector<int>& assignment,
                          std::vector<double>& dist2);
void assign_points(std::span<const SparsePoint> points, std::span<const double> centroids,
                   size_t k, size_t dim, std::vector<int>& assignment, std::vector<double>& dist2);

// Centroid recomputation: mean of assigned points, summed in point-index
// order per cluster. counts[c] receives the member count; empty clusters
// keep a zero centroid.
void update_centroids_serial(std::span<const SparsePoint> points, std::span<const int> assignment,
                             size_t k, size_t dim, std::vector<double>& centroids,
                             std::vector<int>& counts);
void update_centroids(std::span<const SparsePoint> points, std::span<const int> assignment,
                      size_t k, size_t dim, std::vector<double>& centroids,
                      std::vector<int>& counts);

}  // namespace entrex::kernels
