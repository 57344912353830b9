#pragma once
#include <cstddef>
#include <vector>

namespace fosdnn {

// Dense row-major matrix of doubles. Small helper type; rows are contiguous.
struct Matrix {
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : data(r * c, 0.0), rows(r), cols(c) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double* row_ptr(std::size_t i) { return data.data() + i * cols; }
    const double* row_ptr(std::size_t i) const { return data.data() + i * cols; }

    void fill(double v);
};

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws NumericError if a non-positive pivot is met.
Matrix cholesky(const Matrix& a);

// Solves A x = b given the lower Cholesky factor of A.
std::vector<double> cholesky_solve(const Matrix& lower, const std::vector<double>& b);

}  // namespace fosdnn
