#pragma once

#include <cstdint>
#include <vector>

#include "entrex/cluster/sym_matrix.hpp"
#include "entrex/kernels/kernels.hpp"

namespace entrex::cluster {

struct AffinityMatrix {
    SymMatrix a;
    bool degenerate = false;  // all pairwise distances were zero
};

// Gaussian kernel over pairwise distances, A_ij = exp(-d^2 / (2 sigma^2))
// with zero diagonal. sigma is the given quantile of the positive pairwise
// distances: a low quantile keeps the bandwidth at the within-cluster scale
// even when cross-cluster pairs dominate the distance distribution.
// All-zero distances yield a fully connected matrix with the degenerate
// flag set.
AffinityMatrix affinity_matrix(const std::vector<kernels::SparsePoint>& points,
                               double bandwidth_quantile = 0.25);

// Unnormalized graph Laplacian L = D - A with D the degree matrix.
SymMatrix laplacian(const SymMatrix& a);

// Laplacian -> eigendecomposition -> eigengap k -> k-means on the first k
// eigenvector columns, for a prebuilt affinity matrix.
std::vector<std::vector<int>> spectral_partition(const SymMatrix& affinity, uint64_t seed,
                                                 int k_max = 50, int kmeans_max_iter = 100,
                                                 double kmeans_tol = 1e-6);

// Full spectral pipeline: affinity -> spectral_partition. Below 3 points
// (or with degenerate affinity) everything lands in one cluster.
std::vector<std::vector<int>> spectral(const std::vector<kernels::SparsePoint>& points,
                                       uint64_t seed, int k_max = 50, int kmeans_max_iter = 100,
                                       double kmeans_tol = 1e-6, double bandwidth_quantile = 0.25);

}  // namespace entrex::cluster
