#pragma once
#include <string>
#include <vector>

#include "fosdnn/dataset.hpp"
#include "fosdnn/linalg.hpp"

namespace fosdnn {

// Cubic B-spline basis on [0, 1] with clamped equispaced knots. The K basis
// values at any t are nonnegative and sum to one.
struct SplineBasis {
    int k = 15;
    int degree = 3;
    std::vector<double> knots;

    explicit SplineBasis(int k_);
};

// K basis values at t via the Cox-de Boor recursion. t must lie in [0, 1].
std::vector<double> bspline_eval(const SplineBasis& basis, double t);

// Linear function-on-scalar model: Y(t) ~ beta_0(t) + sum_j X_j beta_j(t)
// with each coefficient curve expanded in the spline basis.
struct LinearFosModel {
    SplineBasis basis;
    Matrix coefficients;  // (d+1) x K; row 0 is the intercept curve
    double lambda = 0.0;

    int d() const { return static_cast<int>(coefficients.rows) - 1; }
};

// Quadrature-weighted ridge least squares via normal equations and a
// symmetric positive-definite factorization.
LinearFosModel fit_linear_fos(const FunctionalDataset& data, int k, double lambda,
                              QuadMode mode = QuadMode::PaperLiteral);

std::vector<double> predict_linear(const LinearFosModel& model, const std::vector<double>& x,
                                   const TimeGrid& grid);

// JSON {K, degree, knots, lambda, coefficients}.
std::string linear_model_to_json(const LinearFosModel& model);
LinearFosModel linear_model_from_json(const std::string& text);

}  // namespace fosdnn
