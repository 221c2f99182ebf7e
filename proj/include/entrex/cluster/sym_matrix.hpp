#pragma once

#include <cstddef>
#include <vector>

namespace entrex::cluster {

// Dense symmetric matrix, lower-triangle storage.
class SymMatrix {
public:
    explicit SymMatrix(size_t n) : n_(n), a_(n * (n + 1) / 2, 0.0) {}

    size_t size() const { return n_; }

    double operator()(size_t i, size_t j) const {
        return i >= j ? a_[i * (i + 1) / 2 + j] : a_[j * (j + 1) / 2 + i];
    }
    void set(size_t i, size_t j, double v) {
        if (i >= j)
            a_[i * (i + 1) / 2 + j] = v;
        else
            a_[j * (j + 1) / 2 + i] = v;
    }

private:
    size_t n_;
    std::vector<double> a_;
};

struct EigenDecomposition {
    size_t n = 0;
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // column-major: vector i at [i*n, (i+1)*n)

    double vec(size_t i, size_t row) const { return eigenvectors[i * n + row]; }
};

// Full decomposition via cyclic Jacobi rotations; deterministic sweep order.
// Eigenvalues ascend; each eigenvector's first component of magnitude
// > 1e-12 is made positive. Throws InternalError past the sweep cap.
EigenDecomposition eig_sym(const SymMatrix& m);

// Eigengap heuristic: k = argmax over i in [2, min(n-1, k_max)] of
// lambda_{i+1} - lambda_i (1-based ascending eigenvalues), ties to the
// smallest i.
int choose_k(const std::vector<double>& ascending_eigenvalues, int k_max = 50);

}  // namespace entrex::cluster
