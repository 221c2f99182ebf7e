#include "entrex/cluster/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "entrex/cluster/kmeans.hpp"

namespace entrex::cluster {

using kernels::SparsePoint;

AffinityMatrix affinity_matrix(const std::vector<SparsePoint>& points,
                               double bandwidth_quantile) {
    const size_t n = points.size();
    AffinityMatrix out{SymMatrix(n), false};
    if (n < 2) return out;

    const std::vector<double> dists = kernels::pairwise_distances(points);
    std::vector<double> positive;
    positive.reserve(dists.size());
    for (const double d : dists)
        if (d > 0.0) positive.push_back(d);
    if (positive.empty()) {
        // Every pair coincides; fall back to a fully connected graph.
        out.degenerate = true;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) out.a.set(i, j, 1.0);
        return out;
    }
    // Bandwidth from a low quantile of the positive pairwise distances, so
    // it tracks the within-cluster scale even when most pairs straddle
    // clusters.
    std::sort(positive.begin(), positive.end());
    const double q = std::clamp(bandwidth_quantile, 0.0, 1.0);
    const size_t idx = std::min(positive.size() - 1,
                                static_cast<size_t>(q * static_cast<double>(positive.size() - 1)));
    const double sigma = positive[idx];
    const double denom = 2.0 * sigma * sigma;
    for (size_t i = 0; i + 1 < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double d = dists[kernels::condensed_index(i, j, n)];
            out.a.set(i, j, std::exp(-d * d / denom));
        }
    return out;
}

SymMatrix laplacian(const SymMatrix& a) {
    const size_t n = a.size();
    SymMatrix l(n);
    for (size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (size_t j = 0; j < n; ++j)
            if (j != i) degree += a(i, j);
        l.set(i, i, degree - a(i, i));
        for (size_t j = i + 1; j < n; ++j) l.set(i, j, -a(i, j));
    }
    return l;
}

std::vector<std::vector<int>> spectral_partition(const SymMatrix& affinity, uint64_t seed,
                                                 int k_max, int kmeans_max_iter,
                                                 double kmeans_tol) {
    const size_t n = affinity.size();
    const SymMatrix l = laplacian(affinity);
    const EigenDecomposition eig = eig_sym(l);
    const int k = choose_k(eig.eigenvalues, k_max);

    // Embed entity i as row i of the first k eigenvector columns.
    std::vector<SparsePoint> embedded(n);
    for (size_t i = 0; i < n; ++i) {
        embedded[i].entries.reserve(static_cast<size_t>(k));
        for (int c = 0; c < k; ++c)
            embedded[i].entries.emplace_back(c, eig.vec(static_cast<size_t>(c), i));
    }

    const KmeansResult km =
        kmeans(embedded, static_cast<size_t>(k), seed, kmeans_max_iter, kmeans_tol,
               static_cast<size_t>(k));
    std::vector<std::vector<int>> clusters(static_cast<size_t>(k));
    for (size_t i = 0; i < n; ++i)
        clusters[static_cast<size_t>(km.assignment[i])].push_back(static_cast<int>(i));
    std::erase_if(clusters, [](const std::vector<int>& c) { return c.empty(); });
    std::sort(clusters.begin(), clusters.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return clusters;
}

std::vector<std::vector<int>> spectral(const std::vector<SparsePoint>& points, uint64_t seed,
                                       int k_max, int kmeans_max_iter, double kmeans_tol,
                                       double bandwidth_quantile) {
    const size_t n = points.size();
    std::vector<std::vector<int>> clusters;
    if (n == 0) return clusters;
    const AffinityMatrix am =
        n < 3 ? AffinityMatrix{SymMatrix(n), true} : affinity_matrix(points, bandwidth_quantile);
    if (am.degenerate) {
        clusters.emplace_back();
        for (size_t i = 0; i < n; ++i) clusters.back().push_back(static_cast<int>(i));
        return clusters;
    }
    return spectral_partition(am.a, seed, k_max, kmeans_max_iter, kmeans_tol);
}

}  // namespace entrex::cluster
