#include "entrex/cluster/sym_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entrex/core/io.hpp"
#include "entrex/kernels/kernels.hpp"

namespace entrex::cluster {

namespace {

double offdiag_norm(const std::vector<double>& a, size_t n) {
    double s = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) s += std::abs(a[i * n + j]);
    return s;
}

}  // namespace

EigenDecomposition eig_sym(const SymMatrix& m) {
    const size_t n = m.size();
    std::vector<double> a(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
    std::vector<double> v(n * n, 0.0);
    for (size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    if (n > 1) {
        constexpr int kMaxSweeps = 64;
        int sweep = 0;
        for (; sweep < kMaxSweeps; ++sweep) {
            const double off = offdiag_norm(a, n);
            if (off == 0.0) break;
            // Rotations below the threshold are skipped early in the
            // process (standard cyclic Jacobi thresholding).
            const double thresh = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
            bool rotated = false;
            for (size_t p = 0; p + 1 < n; ++p) {
                for (size_t q = p + 1; q < n; ++q) {
                    const double apq = a[p * n + q];
                    const double g = 100.0 * std::abs(apq);
                    if (sweep > 3 && std::abs(a[p * n + p]) + g == std::abs(a[p * n + p]) &&
                        std::abs(a[q * n + q]) + g == std::abs(a[q * n + q])) {
                        a[p * n + q] = 0.0;
                        a[q * n + p] = 0.0;
                        continue;
                    }
                    if (std::abs(apq) <= thresh) continue;
                    const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    double t;
                    if (std::abs(theta) + g == std::abs(theta) && std::abs(theta) > 0.0) {
                        t = 1.0 / (2.0 * theta);
                    } else {
                        t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                        if (theta < 0.0) t = -t;
                    }
                    const double c = 1.0 / std::sqrt(1.0 + t * t);
                    const double s = t * c;
                    const double tau = s / (1.0 + c);
                    const double h = t * apq;
                    a[p * n + p] -= h;
                    a[q * n + q] += h;
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    rotated = true;

                    const auto nn = static_cast<int64_t>(n);
                    // Element-wise independent updates; bit-deterministic
                    // under any thread count.
#pragma omp parallel for schedule(static) num_threads(kernels::max_threads()) if (n >= 256)
                    for (int64_t jj = 0; jj < nn; ++jj) {
                        const auto j = static_cast<size_t>(jj);
                        if (j != p && j != q) {
                            const double ajp = a[j * n + p];
                            const double ajq = a[j * n + q];
                            a[j * n + p] = ajp - s * (ajq + tau * ajp);
                            a[j * n + q] = ajq + s * (ajp - tau * ajq);
                            a[p * n + j] = a[j * n + p];
                            a[q * n + j] = a[j * n + q];
                        }
                        const double vjp = v[j * n + p];
                        const double vjq = v[j * n + q];
                        v[j * n + p] = vjp - s * (vjq + tau * vjp);
                        v[j * n + q] = vjq + s * (vjp - tau * vjq);
                    }
                }
            }
            if (!rotated && thresh == 0.0) break;
        }
        if (sweep == kMaxSweeps)
            throw InternalError("jacobi eigensolver did not converge within the sweep cap");
    }

    EigenDecomposition out;
    out.n = n;
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return a[x * n + x] < a[y * n + y]; });
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n * n);
    for (size_t i = 0; i < n; ++i) {
        const size_t src = order[i];
        out.eigenvalues[i] = a[src * n + src];
        double sign = 1.0;
        for (size_t row = 0; row < n; ++row) {
            const double val = v[row * n + src];
            if (std::abs(val) > 1e-12) {
                sign = val < 0.0 ? -1.0 : 1.0;
                break;
            }
        }
        for (size_t row = 0; row < n; ++row) out.eigenvectors[i * n + row] = sign * v[row * n + src];
    }
    return out;
}

int choose_k(const std::vector<double>& ev, int k_max) {
    const int n = static_cast<int>(ev.size());
    const int hi = std::min(n - 1, k_max);
    int best_i = 2;
    double best_gap = -1.0;
    for (int i = 2; i <= hi; ++i) {
        const double gap = ev[static_cast<size_t>(i)] - ev[static_cast<size_t>(i) - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best_i = i;
        }
    }
    return best_i;
}

}  // namespace entrex::cluster
