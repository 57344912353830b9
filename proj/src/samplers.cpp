#include "fosdnn/samplers.hpp"

#include <string>

#include "fosdnn/errors.hpp"

namespace fosdnn {

Matrix sample_uniform_cube(RngStream& rng, std::size_t n, std::size_t d, double lo, double hi) {
    if (!(lo < hi)) {
        throw ConfigError("sample_uniform_cube: need lo < hi");
    }
    if (n < 1 || d < 1) {
        throw ConfigError("sample_uniform_cube: need n >= 1 and d >= 1");
    }
    Matrix x(n, d);
    for (double& v : x.data) {
        v = rng.next_uniform(lo, hi);
    }
    return x;
}

Matrix equicorrelation_matrix(std::size_t d, double rho) {
    Matrix sigma(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            sigma(i, j) = (i == j) ? 1.0 : rho;
        }
    }
    return sigma;
}

Matrix sample_equicorr_normal(RngStream& rng, std::size_t n, std::size_t d, double rho) {
    if (n < 1 || d < 1) {
        throw ConfigError("sample_equicorr_normal: need n >= 1 and d >= 1");
    }
    if (d > 1) {
        double lower = -1.0 / static_cast<double>(d - 1);
        if (!(rho > lower && rho < 1.0)) {
            throw ConfigError("sample_equicorr_normal: rho = " + std::to_string(rho) +
                              " outside the positive-definite range (" +
                              std::to_string(lower) + ", 1)");
        }
    }
    Matrix lfac = cholesky(equicorrelation_matrix(d, rho));
    Matrix x(n, d);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            z[k] = rng.next_normal();
        }
        double* row = x.row_ptr(i);
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k <= j; ++k) {
                s += lfac(j, k) * z[k];
            }
            row[j] = s;
        }
    }
    return x;
}

}  // namespace fosdnn
