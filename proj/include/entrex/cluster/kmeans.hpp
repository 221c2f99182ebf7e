#pragma once

#include <cstdint>
#include <vector>

#include "entrex/kernels/kernels.hpp"

namespace entrex::cluster {

struct KmeansResult {
    std::vector<int> assignment;
    std::vector<double> centroids;  // row-major k x dim
    size_t k = 0;
    size_t dim = 0;
    double wcss = 0.0;
    std::vector<double> wcss_trace;  // one entry per assignment step
};

// k-means++ seeding followed by Lloyd iterations until the largest centroid
// move drops below tol or max_iter is reached. Empty clusters are reseeded
// to the point farthest from its assigned centroid. Throws ConfigError when
// k exceeds the point count.
KmeansResult kmeans(const std::vector<kernels::SparsePoint>& points, size_t k, uint64_t seed,
                    int max_iter = 100, double tol = 1e-6, size_t dim = 0);

// Largest dimension index + 1 across the points (0 for all-empty input).
size_t infer_dim(const std::vector<kernels::SparsePoint>& points);

}  // namespace entrex::cluster
