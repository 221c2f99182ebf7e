#pragma once

#include <cstdint>
#include <vector>

#include "entrex/kernels/kernels.hpp"

namespace entrex::cluster {

struct XMeansConfig {
    int k_min = 2;
    int k_max = 50;
    int max_iter = 100;
    double tol = 1e-6;
    uint64_t seed = 0;
};

// Bayesian Information Criterion under the identical-spherical-Gaussian
// model: loglik - (p/2) ln n with p = k * (d + 1) and shared variance
// sigma^2 = distortion / (n - k). Higher is better. Returns +infinity when
// the distortion is zero (zero-variance model dominates).
double bic(const std::vector<kernels::SparsePoint>& points, const std::vector<int>& assignment,
           size_t k, size_t effective_dim);

// Grows the cluster count from k_min by BIC-scored local 2-means splits
// until no split improves or k_max is reached. Returns the partition as
// member-index lists, ordered deterministically.
std::vector<std::vector<int>> xmeans(const std::vector<kernels::SparsePoint>& points,
                                     const XMeansConfig& config);

}  // namespace entrex::cluster
