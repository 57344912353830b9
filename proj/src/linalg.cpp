#include "fosdnn/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "fosdnn/errors.hpp"

namespace fosdnn {

void Matrix::fill(double v) {
    std::fill(data.begin(), data.end(), v);
}

Matrix cholesky(const Matrix& a) {
    if (a.rows != a.cols) {
        throw ShapeError("cholesky: matrix must be square");
    }
    const std::size_t n = a.rows;
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            diag -= l(j, k) * l(j, k);
        }
        if (!(diag > 0.0) || !std::isfinite(diag)) {
            throw NumericError("cholesky: matrix is not positive definite");
        }
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const Matrix& lower, const std::vector<double>& b) {
    const std::size_t n = lower.rows;
    if (b.size() != n) {
        throw ShapeError("cholesky_solve: dimension mismatch");
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= lower(i, k) * y[k];
        }
        y[i] = s / lower(i, i);
    }
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            s -= lower(k, ii) * x[k];
        }
        x[ii] = s / lower(ii, ii);
    }
    return x;
}

}  // namespace fosdnn
