#pragma once

// Shared helpers for the test suites: planted-partition generators, the
// adjusted Rand index, and scratch-directory management. Everything here is
// independent of the implementation paths under test.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "entrex/kernels/kernels.hpp"

namespace testutil {

inline double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; avoids std::normal_distribution so sequences stay stable.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = unit_real(rng);
    while (u1 <= 1e-300) u1 = unit_real(rng);
    const double u2 = unit_real(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Adjusted Rand index between two labelings of the same points.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    const size_t n = a.size();
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> ca, cb;
    for (size_t i = 0; i < n; ++i) {
        joint[{a[i], b[i]}] += 1.0;
        ca[a[i]] += 1.0;
        cb[b[i]] += 1.0;
    }
    auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_joint = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& [k, v] : joint) {
        (void)k;
        sum_joint += comb2(v);
    }
    for (const auto& [k, v] : ca) {
        (void)k;
        sum_a += comb2(v);
    }
    for (const auto& [k, v] : cb) {
        (void)k;
        sum_b += comb2(v);
    }
    const double total = comb2(static_cast<double>(n));
    const double expected = sum_a * sum_b / total;
    const double max_index = (sum_a + sum_b) / 2.0;
    if (max_index == expected) return 1.0;
    return (sum_joint - expected) / (max_index - expected);
}

// Labels a partition (list of member-index lists) into a flat assignment.
inline std::vector<int> partition_labels(const std::vector<std::vector<int>>& partition,
                                         size_t n) {
    std::vector<int> labels(n, -1);
    for (size_t c = 0; c < partition.size(); ++c)
        for (const int i : partition[c]) labels[static_cast<size_t>(i)] = static_cast<int>(c);
    return labels;
}

// Dense d-dimensional Gaussian blobs as sparse points.
inline std::vector<entrex::kernels::SparsePoint> gaussian_blobs(
    const std::vector<std::vector<double>>& centers, size_t per_blob, double sigma,
    std::mt19937_64& rng, std::vector<int>* labels_out = nullptr) {
    std::vector<entrex::kernels::SparsePoint> points;
    const size_t d = centers.front().size();
    for (size_t c = 0; c < centers.size(); ++c) {
        for (size_t i = 0; i < per_blob; ++i) {
            entrex::kernels::SparsePoint p;
            for (size_t j = 0; j < d; ++j)
                p.entries.emplace_back(static_cast<int32_t>(j),
                                       centers[c][j] + sigma * gaussian(rng));
            points.push_back(std::move(p));
            if (labels_out) labels_out->push_back(static_cast<int>(c));
        }
    }
    return points;
}

// Unique scratch directory under the build tree; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& name) {
        dir_ = std::filesystem::temp_directory_path() /
               ("entrex-test-" + name + "-" + std::to_string(counter()++));
        std::filesystem::remove_all(dir_);
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() { std::filesystem::remove_all(dir_); }
    const std::filesystem::path& path() const { return dir_; }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::filesystem::path dir_;
};

}  // namespace testutil
