#pragma once
#include "fosdnn/linalg.hpp"
#include "fosdnn/rng.hpp"

namespace fosdnn {

// n x d matrix with i.i.d. entries uniform on [lo, hi).
Matrix sample_uniform_cube(RngStream& rng, std::size_t n, std::size_t d, double lo, double hi);

// Rows i.i.d. N_d(0, Sigma_rho) with unit diagonal and constant off-diagonal
// rho, realized through the Cholesky factor of Sigma_rho. Requires
// -1/(d-1) < rho < 1 so the covariance is positive definite.
Matrix sample_equicorr_normal(RngStream& rng, std::size_t n, std::size_t d, double rho);

// The equicorrelation covariance itself (exposed for tests and ingestion
// tooling that reuses the generic Cholesky path).
Matrix equicorrelation_matrix(std::size_t d, double rho);

}  // namespace fosdnn
