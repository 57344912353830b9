#include "fosdnn/quadrature.hpp"

#include <cmath>
#include <string>

#include "fosdnn/errors.hpp"

namespace fosdnn {

TimeGrid::TimeGrid(std::vector<double> pts) : points(std::move(pts)) {
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (!std::isfinite(points[j]) || points[j] < 0.0 || points[j] > 1.0) {
            throw ConfigError("TimeGrid: point " + std::to_string(points[j]) +
                              " outside [0, 1]");
        }
        if (j > 0 && !(points[j] > points[j - 1])) {
            throw ConfigError("TimeGrid: points must be strictly increasing");
        }
    }
}

TimeGrid TimeGrid::equispaced(std::size_t g) {
    if (g < 2) {
        throw ConfigError("TimeGrid::equispaced: need at least 2 points");
    }
    std::vector<double> pts(g);
    for (std::size_t j = 0; j < g; ++j) {
        pts[j] = static_cast<double>(j) / static_cast<double>(g - 1);
    }
    pts.back() = 1.0;
    return TimeGrid(std::move(pts));
}

std::vector<double> riemann_weights(const TimeGrid& grid, QuadMode mode) {
    const std::size_t n = grid.size();
    if (n == 0) {
        throw ConfigError("riemann_weights: empty grid");
    }
    std::vector<double> w(n);
    if (mode == QuadMode::PaperLiteral || n == 1) {
        // Single-point grids degenerate to the right-endpoint weight in
        // either mode.
        double prev = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = grid[j] - prev;
            prev = grid[j];
        }
    } else {
        w[0] = (grid[1] - grid[0]) / 2.0;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            w[j] = (grid[j + 1] - grid[j - 1]) / 2.0;
        }
        w[n - 1] = (grid[n - 1] - grid[n - 2]) / 2.0;
    }
    return w;
}

double quad_integrate(const std::vector<double>& values, const std::vector<double>& weights) {
    if (values.empty()) {
        throw ConfigError("quad_integrate: empty input");
    }
    if (values.size() != weights.size()) {
        throw ShapeError("quad_integrate: values and weights differ in length");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        s += values[j] * weights[j];
    }
    return s;
}

}  // namespace fosdnn
