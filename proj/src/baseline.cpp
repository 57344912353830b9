#include "fosdnn/baseline.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fosdnn/errors.hpp"

namespace fosdnn {

SplineBasis::SplineBasis(int k_) : k(k_) {
    if (k < 4) {
        throw ConfigError("SplineBasis: need K >= degree + 1 = 4");
    }
    // Clamped knot vector: degree+1 copies of each boundary, K - degree - 1
    // equispaced interior knots.
    const int interior = k - degree - 1;
    knots.assign(static_cast<std::size_t>(degree) + 1, 0.0);
    for (int i = 1; i <= interior; ++i) {
        knots.push_back(static_cast<double>(i) / static_cast<double>(interior + 1));
    }
    knots.insert(knots.end(), static_cast<std::size_t>(degree) + 1, 1.0);
}

std::vector<double> bspline_eval(const SplineBasis& basis, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ConfigError("bspline_eval: t outside [0, 1]");
    }
    const int p = basis.degree;
    const int k = basis.k;
    const auto& u = basis.knots;

    // Knot span containing t (clamp t = 1 into the last nonempty span).
    int span = p;
    while (span < k - 1 && t >= u[static_cast<std::size_t>(span) + 1]) {
        ++span;
    }

    // Cox-de Boor on the nonzero window [span-p, span].
    std::vector<double> n(static_cast<std::size_t>(p) + 1, 0.0);
    std::vector<double> left(static_cast<std::size_t>(p) + 1, 0.0);
    std::vector<double> right(static_cast<std::size_t>(p) + 1, 0.0);
    n[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[static_cast<std::size_t>(j)] = t - u[static_cast<std::size_t>(span + 1 - j)];
        right[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(span + j)] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            double denom = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
            double temp = n[static_cast<std::size_t>(r)] / denom;
            n[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        n[static_cast<std::size_t>(j)] = saved;
    }

    std::vector<double> out(static_cast<std::size_t>(k), 0.0);
    for (int j = 0; j <= p; ++j) {
        out[static_cast<std::size_t>(span - p + j)] = n[static_cast<std::size_t>(j)];
    }
    return out;
}

LinearFosModel fit_linear_fos(const FunctionalDataset& data, int k, double lambda,
                              QuadMode mode) {
    if (data.samples.empty()) {
        throw ConfigError("fit_linear_fos: empty dataset");
    }
    if (lambda < 0.0) {
        throw ConfigError("fit_linear_fos: lambda must be >= 0");
    }
    data.validate();
    SplineBasis basis(k);
    const std::size_t d = static_cast<std::size_t>(data.d);
    const std::size_t ncoef = (d + 1) * static_cast<std::size_t>(k);
    const double inv_n = 1.0 / static_cast<double>(data.size());

    // Normal equations for the flattened coefficient matrix. The feature
    // vector of one row is u (x) b, u = (1, x), b = basis values; b has at
    // most degree+1 nonzeros, exploited below.
    Matrix a(ncoef, ncoef);
    std::vector<double> rhs(ncoef, 0.0);
    std::vector<double> u(d + 1);
    u[0] = 1.0;
    for (const auto& s : data.samples) {
        std::copy(s.x.begin(), s.x.end(), u.begin() + 1);
        auto qw = riemann_weights(s.grid, mode);
        for (std::size_t j = 0; j < s.grid.size(); ++j) {
            auto b = bspline_eval(basis, s.grid[j]);
            std::size_t lo = 0;
            while (lo + 1 < b.size() && b[lo] == 0.0) ++lo;
            std::size_t hi = std::min<std::size_t>(lo + 4, b.size());
            const double w = qw[j] * inv_n;
            if (w == 0.0) continue;
            for (std::size_t p1 = 0; p1 <= d; ++p1) {
                for (std::size_t k1 = lo; k1 < hi; ++k1) {
                    const double f1 = u[p1] * b[k1];
                    if (f1 == 0.0) continue;
                    const std::size_t row = p1 * static_cast<std::size_t>(k) + k1;
                    rhs[row] += w * f1 * s.y[j];
                    const double wf1 = w * f1;
                    for (std::size_t p2 = 0; p2 <= d; ++p2) {
                        double* arow = a.row_ptr(row) + p2 * static_cast<std::size_t>(k);
                        const double up2 = u[p2];
                        for (std::size_t k2 = lo; k2 < hi; ++k2) {
                            arow[k2] += wf1 * up2 * b[k2];
                        }
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < ncoef; ++i) {
        a(i, i) += lambda;
    }

    Matrix lfac;
    try {
        lfac = cholesky(a);
    } catch (const NumericError&) {
        if (lambda == 0.0) {
            throw NumericError(
                "fit_linear_fos: normal equations are singular at lambda = 0; "
                "refit with lambda > 0");
        }
        // Jitter fallback for borderline conditioning.
        for (std::size_t i = 0; i < ncoef; ++i) {
            a(i, i) += 1e-10;
        }
        lfac = cholesky(a);
    }
    auto coef = cholesky_solve(lfac, rhs);

    LinearFosModel model{basis, Matrix(d + 1, static_cast<std::size_t>(k)), lambda};
    std::copy(coef.begin(), coef.end(), model.coefficients.data.begin());
    return model;
}

std::vector<double> predict_linear(const LinearFosModel& model, const std::vector<double>& x,
                                   const TimeGrid& grid) {
    if (static_cast<int>(x.size()) != model.d()) {
        throw ShapeError("predict_linear: predictor length does not match model");
    }
    const std::size_t d = x.size();
    const std::size_t k = static_cast<std::size_t>(model.basis.k);
    // Covariate-weighted basis coefficients, then one basis evaluation per
    // grid point.
    std::vector<double> combo(k, 0.0);
    for (std::size_t kk = 0; kk < k; ++kk) {
        double acc = model.coefficients(0, kk);
        for (std::size_t p = 0; p < d; ++p) {
            acc += x[p] * model.coefficients(p + 1, kk);
        }
        combo[kk] = acc;
    }
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        auto b = bspline_eval(model.basis, grid[j]);
        double acc = 0.0;
        for (std::size_t kk = 0; kk < k; ++kk) {
            acc += combo[kk] * b[kk];
        }
        out[j] = acc;
    }
    return out;
}

std::string linear_model_to_json(const LinearFosModel& model) {
    nlohmann::json doc;
    doc["K"] = model.basis.k;
    doc["degree"] = model.basis.degree;
    doc["knots"] = model.basis.knots;
    doc["lambda"] = model.lambda;
    doc["coefficients"] = model.coefficients.data;
    doc["d"] = model.d();
    return doc.dump(2);
}

LinearFosModel linear_model_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    SplineBasis basis(doc.at("K").get<int>());
    int d = doc.at("d").get<int>();
    LinearFosModel model{basis,
                         Matrix(static_cast<std::size_t>(d) + 1,
                                static_cast<std::size_t>(basis.k)),
                         doc.at("lambda").get<double>()};
    auto coefs = doc.at("coefficients").get<std::vector<double>>();
    if (coefs.size() != model.coefficients.data.size()) {
        throw ShapeError("linear_model_from_json: coefficient count mismatch");
    }
    model.coefficients.data = std::move(coefs);
    return model;
}

}  // namespace fosdnn
