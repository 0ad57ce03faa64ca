#pragma once

#include <cstddef>
#include <vector>

namespace avgdyn {

// Minimal dense row-major matrix, just enough for transition matrices and the
// eigensolver. Sizes here stay in the low thousands.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    std::vector<double> operator*(const std::vector<double>& x) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column j is the eigenvector for values[j], orthonormal
};

// Cyclic Jacobi for symmetric matrices. Deterministic rotation order, so the
// same input bytes give the same output bytes on every run.
EigenDecomposition jacobi_eigen(const Matrix& sym, double tol = 1e-14, int max_sweeps = 64);

} // namespace avgdyn
