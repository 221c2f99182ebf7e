#include "entrex/cluster/xmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "entrex/cluster/kmeans.hpp"
#include "entrex/core/hash.hpp"

namespace entrex::cluster {

using kernels::SparsePoint;

double bic(const std::vector<SparsePoint>& points, const std::vector<int>& assignment, size_t k,
           size_t effective_dim) {
    const size_t n = points.size();
    const auto d = static_cast<double>(std::max<size_t>(effective_dim, 1));
    const auto nd = static_cast<double>(n);

    const size_t dim = std::max<size_t>(infer_dim(points), 1);
    std::vector<double> centroids;
    std::vector<int> counts;
    kernels::update_centroids_serial(points, assignment, k, dim, centroids, counts);

    double distortion = 0.0;
    for (size_t i = 0; i < n; ++i)
        distortion += kernels::point_centroid_dist2(
            points[i], centroids.data() + static_cast<size_t>(assignment[i]) * dim, dim);

    if (n <= k || distortion <= 0.0) return std::numeric_limits<double>::infinity();
    const double sigma2 = distortion / (nd - static_cast<double>(k));

    double loglik = 0.0;
    for (size_t c = 0; c < k; ++c) {
        if (counts[c] > 0)
            loglik += static_cast<double>(counts[c]) * std::log(static_cast<double>(counts[c]));
    }
    loglik -= nd * std::log(nd);
    loglik -= nd * d / 2.0 * std::log(2.0 * M_PI * sigma2);
    loglik -= (nd - static_cast<double>(k)) / 2.0;

    const double p = static_cast<double>(k) * (d + 1.0);
    return loglik - p / 2.0 * std::log(nd);
}

namespace {

size_t effective_dim(const std::vector<SparsePoint>& points) {
    std::set<int32_t> dims;
    for (const auto& p : points)
        for (const auto& [idx, v] : p.entries) {
            (void)v;
            dims.insert(idx);
        }
    return dims.empty() ? 1 : dims.size();
}

uint64_t child_seed(uint64_t seed, int round, size_t cluster) {
    return mix64(seed ^ mix64((static_cast<uint64_t>(round) << 20) + cluster + 1));
}

}  // namespace

std::vector<std::vector<int>> xmeans(const std::vector<SparsePoint>& points,
                                     const XMeansConfig& config) {
    const size_t n = points.size();
    std::vector<std::vector<int>> clusters;
    if (n < 2) {
        if (n == 1) clusters.push_back({0});
        return clusters;
    }

    const size_t k0 = std::min<size_t>(static_cast<size_t>(std::max(config.k_min, 1)), n);
    const KmeansResult base = kmeans(points, k0, config.seed, config.max_iter, config.tol);
    clusters.resize(k0);
    for (size_t i = 0; i < n; ++i)
        clusters[static_cast<size_t>(base.assignment[i])].push_back(static_cast<int>(i));
    std::erase_if(clusters, [](const std::vector<int>& c) { return c.empty(); });

    for (int round = 0;; ++round) {
        bool improved = false;
        const size_t count_at_start = clusters.size();
        for (size_t ci = 0; ci < count_at_start; ++ci) {
            if (static_cast<int>(clusters.size()) >= config.k_max) break;
            const std::vector<int>& members = clusters[ci];
            if (members.size() < 2) continue;

            std::vector<SparsePoint> local;
            local.reserve(members.size());
            for (const int m : members) local.push_back(points[static_cast<size_t>(m)]);

            const KmeansResult split =
                kmeans(local, 2, child_seed(config.seed, round, ci), config.max_iter, config.tol);
            // A split that leaves one side empty carries no structure.
            const bool two_sided =
                std::count(split.assignment.begin(), split.assignment.end(), 0) > 0 &&
                std::count(split.assignment.begin(), split.assignment.end(), 1) > 0;
            if (!two_sided) continue;

            const size_t d_eff = effective_dim(local);
            const std::vector<int> parent_assignment(local.size(), 0);
            const double parent_bic = bic(local, parent_assignment, 1, d_eff);
            const double child_bic = bic(local, split.assignment, 2, d_eff);
            if (!(child_bic > parent_bic)) continue;

            std::vector<int> left, right;
            for (size_t i = 0; i < members.size(); ++i)
                (split.assignment[i] == 0 ? left : right).push_back(members[i]);
            clusters[ci] = std::move(left);
            clusters.push_back(std::move(right));
            improved = true;
        }
        if (!improved || static_cast<int>(clusters.size()) >= config.k_max) break;
    }

    for (auto& c : clusters) std::sort(c.begin(), c.end());
    std::sort(clusters.begin(), clusters.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return clusters;
}

}  // namespace entrex::cluster
