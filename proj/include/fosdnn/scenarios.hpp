#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "fosdnn/dataset.hpp"
#include "fosdnn/linalg.hpp"
#include "fosdnn/rng.hpp"

namespace fosdnn {

enum class Scenario { S1, S1A, S2, S3 };

// Predictor joint distributions: 1 = Unif([-1,1]^d), 2 = N_d(0, Sigma_0.1),
// 3 = N_d(0, Sigma_0.5).
struct ScenarioSpec {
    Scenario scenario = Scenario::S1;
    int model = 1;  // 1..3
    int xtype = 1;  // 1..3
    int n_train = 200;
    int n_test = 1000;
    int grid_size = 100;
    double noise_sd = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
    std::string label() const;
};

int scenario_dim(Scenario s);
std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// Named scalar helpers used by the benchmark formulas.
namespace act {
double tanh_fn(double x);
double gaussian(double x);   // e^(-x^2)
double relu(double x);
double logistic(double x);   // 1 / (1 + e^(-x))
}  // namespace act

// The published true function for (scenario, model), before signal scaling.
double true_function(const ScenarioSpec& spec, std::span<const double> x, double t);

// Predictor draws for the spec's xtype: n x d matrix.
Matrix sample_predictors(const ScenarioSpec& spec, std::size_t n, RngStream& rng);

struct ScaledSignal {
    double c = 1.0;            // 1 / sqrt(integrated variance)
    std::size_t mc_samples = 0;
};

// c = 1/sqrt(V) where V is the trapezoid quadrature over the grid of the
// Monte Carlo variance (over X) of f(X, t). Throws NumericError when the
// estimated variance is degenerate.
ScaledSignal estimate_scale_fn(const std::function<double(std::span<const double>, double)>& f,
                               const ScenarioSpec& spec, std::size_t n_mc, RngStream& rng);

ScaledSignal estimate_scale(const ScenarioSpec& spec, std::size_t n_mc, RngStream& rng);

// Cached per (scenario, model, xtype, grid_size): estimated once with a
// dedicated seed and n_mc = 1e5, then reused, so the scaling constant acts
// as a model constant across replicates.
double signal_scale(const ScenarioSpec& spec);

struct GeneratedData {
    FunctionalDataset train;
    FunctionalDataset test;
    ScaledSignal signal;
};

// Y_i(t_j) = c f(X_i, t_j) + eps_ij with eps i.i.d. N(0, noise_sd^2) per
// grid point; the test responses carry noise as well. Bit-reproducible
// given (spec, rng).
GeneratedData generate_dataset(const ScenarioSpec& spec, RngStream& rng);

}  // namespace fosdnn
