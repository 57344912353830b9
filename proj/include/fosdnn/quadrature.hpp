#pragma once
#include <vector>

namespace fosdnn {

// Observation times of one curve: strictly increasing, all within [0, 1].
struct TimeGrid {
    std::vector<double> points;

    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> pts);

    std::size_t size() const { return points.size(); }
    double operator[](std::size_t j) const { return points[j]; }

    // G equispaced points 0 = t_1 < ... < t_G = 1 (spacing 1/(G-1)).
    static TimeGrid equispaced(std::size_t g);
};

enum class QuadMode {
    // w_j = t_j - t_{j-1} with t_0 := 0, the right-endpoint Riemann sum of
    // the discretized objective. Note the first weight is zero whenever the
    // grid starts at t_1 = 0. Weights sum to the last grid point.
    PaperLiteral,
    // Standard trapezoid weights; exact for piecewise-linear integrands.
    Trapezoid,
};

std::vector<double> riemann_weights(const TimeGrid& grid, QuadMode mode);

// Dot product of values and weights.
double quad_integrate(const std::vector<double>& values, const std::vector<double>& weights);

}  // namespace fosdnn
