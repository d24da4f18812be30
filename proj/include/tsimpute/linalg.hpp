#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsimpute {

/// Minimal dense row-major matrix for the small systems this project
/// solves (state-space recursions, local regressions). Not a general
/// linear algebra library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
void add_in_place(Matrix& a, const Matrix& b);
void symmetrize(Matrix& a);
double trace(const Matrix& a);

/// Solves A x = b for symmetric positive definite A via Cholesky.
/// Returns false (x untouched) if A is not numerically PD.
bool cholesky_solve(Matrix a, std::vector<double> b, std::vector<double>& x);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Returns false on a (near-)singular system.
bool solve_linear(Matrix a, std::vector<double> b, std::vector<double>& x);

/// Eigenvalues of a symmetric matrix by the cyclic Jacobi method,
/// ascending order. Intended for small dimensions (PSD validation).
std::vector<double> symmetric_eigenvalues(Matrix a);

}  // namespace tsimpute
