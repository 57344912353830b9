#include "fosdnn/scenarios.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fosdnn/errors.hpp"
#include "fosdnn/samplers.hpp"

namespace fosdnn {

int scenario_dim(Scenario s) {
    switch (s) {
        case Scenario::S1: return 3;
        case Scenario::S1A: return 5;
        case Scenario::S2: return 5;
        case Scenario::S3: return 10;
    }
    throw ConfigError("scenario_dim: unknown scenario");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::S1: return "s1";
        case Scenario::S1A: return "s1a";
        case Scenario::S2: return "s2";
        case Scenario::S3: return "s3";
    }
    throw ConfigError("scenario_name: unknown scenario");
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "s1") return Scenario::S1;
    if (name == "s1a" || name == "s1-a") return Scenario::S1A;
    if (name == "s2") return Scenario::S2;
    if (name == "s3") return Scenario::S3;
    throw ConfigError("unknown scenario: " + name + " (expected s1, s1a, s2 or s3)");
}

void ScenarioSpec::validate() const {
    if (model < 1 || model > 3) {
        throw ConfigError("ScenarioSpec: model must be 1, 2 or 3");
    }
    if (xtype < 1 || xtype > 3) {
        throw ConfigError("ScenarioSpec: xtype must be 1, 2 or 3");
    }
    if (n_train < 1 || n_test < 1) {
        throw ConfigError("ScenarioSpec: sample sizes must be >= 1");
    }
    if (grid_size < 2) {
        throw ConfigError("ScenarioSpec: grid_size must be >= 2");
    }
    if (noise_sd < 0.0) {
        throw ConfigError("ScenarioSpec: noise_sd must be >= 0");
    }
}

std::string ScenarioSpec::label() const {
    return scenario_name(scenario) + "/m" + std::to_string(model) + "/x" + std::to_string(xtype);
}

namespace act {

double tanh_fn(double x) { return std::tanh(x); }
double gaussian(double x) { return std::exp(-x * x); }
double relu(double x) { return x > 0.0 ? x : 0.0; }
double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace act

namespace {

using act::gaussian;
using act::logistic;
using act::relu;
using act::tanh_fn;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double s1_model(int model, std::span<const double> x, double t) {
    const double x1 = x[0], x2 = x[1], x3 = x[2];
    switch (model) {
        case 1:
            return (x1 * std::sin(4.0 * t)) / (x1 * x1 + 1.0) +
                   std::exp(-(x2 - 2.0) * (x2 - 2.0) / 2.0) + (1.0 + t * std::cos(x3));
        case 2:
            // The second summand reads x2^2 in the quadratic sum.
            return (x1 * x2 * std::cos(kTwoPi * t) +
                    std::log(1.0 + x2 * x2 + x3 * x3 + t * t)) *
                   std::exp(-(x1 * x1 + x2 * x2 + x3 * x3) / 10.0);
        case 3: {
            double num = x1 * t * t + x2 * t - x3;
            double sint = std::sin(t);
            return num * num /
                   (1.0 + x1 * x1 * t + x2 * x2 * sint * sint + x3 * x3);
        }
    }
    throw ConfigError("s1_model: bad model");
}

double s1a_model(int model, std::span<const double> x, double t) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4];
    switch (model) {
        case 1:
            return std::sin(x1 + t) + (x2 + t) * (x2 + t) / (x2 * x2 + 1.0) +
                   std::exp(x3 * t) / (1.0 + std::exp(x3)) +
                   std::log(1.0 + x4 * x4 + t * t) + x5 * (1.0 - t) * std::cos(kTwoPi * t);
        case 2:
            return std::cos(x1 - 2.0 * x2 + x3) * t * t + std::sin(x4 + x5) * std::exp(t);
        case 3: {
            double c = std::cos(kTwoPi * t);
            return (x1 - x2 * t + 2.0 * x3 * t * t) /
                   (1.0 + 2.0 * x4 * x4 + 4.0 * x5 * x5 * c * c);
        }
    }
    throw ConfigError("s1a_model: bad model");
}

// Spike along |x| = 1/2 modulated in t; the building block of the
// inhomogeneous scenarios.
double spike_exp(double ax, double t, double rate) {
    double s = tanh_fn(ax - 0.5);
    return std::exp(-rate * s * s * (t + 1.0));
}

double s2_high1(double ax1, double t) {
    double osc = gaussian(tanh_fn(ax1)) - 0.5;
    return spike_exp(ax1, t, 15.0) * std::sin(50.0 * osc * osc);
}

double s2_high2(double ax2, double t) {
    double s = tanh_fn(ax2 - 0.5);
    double osc = std::exp(gaussian(ax2)) - 0.5;
    return gaussian(-50.0 * s * s * (t + 1.0)) * std::cos(osc * osc);
}

double s2_high3(double ax3, double t) {
    double s = tanh_fn(ax3 - 0.5);
    double osc = relu(std::exp(ax3)) - 0.5;
    return -tanh_fn(-80.0 * s * s * (t + 1.0)) * std::sin(osc * osc);
}

double s2_model(int model, std::span<const double> x, double t) {
    const double a1 = std::fabs(x[0]), a2 = std::fabs(x[1]), a3 = std::fabs(x[2]),
                 a4 = std::fabs(x[3]), a5 = std::fabs(x[4]);
    switch (model) {
        case 1: {
            double base = relu(a1) + tanh_fn(a2 + a3) + gaussian(a4 + a5);
            return s2_high1(a1, t) + std::log(1.0 + base * base * (t + 1.0));
        }
        case 2: {
            double low = (a1 + a2 * (t + 1.0)) /
                         (1.0 + std::fabs(x[2] + x[3] + x[4]) * (t + 1.0) * (t + 1.0));
            return s2_high1(a1, t) + s2_high2(a2, t) + low;
        }
        case 3: {
            double low = std::exp(-(a1 * a1 + a2 * a2 + a3 * a3) / 10.0) *
                         (1.0 + (a4 * a4 + a5 * a5) * (t + 1.0));
            return s2_high1(a1, t) + s2_high2(a2, t) + s2_high3(a3, t) + low;
        }
    }
    throw ConfigError("s2_model: bad model");
}

// Scenario 3 variants. The oscillation grouping differs between Models 1/2
// and Model 3 exactly as published; "logit" is the logistic sigmoid.
double s3_high1_grouped_outside(double ax1, double t, double rate) {
    double osc = gaussian(tanh_fn(ax1)) - 0.5;
    return spike_exp(ax1, t, rate) * std::sin(50.0 * osc * osc);
}

double s3_high1_grouped_inside(double ax1, double t, double rate) {
    double osc = gaussian(tanh_fn(ax1) - 0.5);
    return spike_exp(ax1, t, rate) * std::sin(50.0 * osc * osc);
}

double s3_high2(double x2, double t) {
    double ax2 = std::fabs(x2);
    double s = tanh_fn(ax2 - 0.5);
    double osc = std::exp(gaussian(x2)) - 0.5;
    return gaussian(-50.0 * s * s * (t + 1.0)) * std::cos(osc * osc);
}

double s3_high3(double ax3, double t) {
    double s = tanh_fn(ax3 - 0.5);
    double osc = relu(std::exp(ax3)) - 0.5;
    return logistic(-80.0 * s * s * (t + 1.0)) * std::sin(5.0 * osc * osc);
}

double s3_model(int model, std::span<const double> x, double t) {
    double a[10];
    for (int i = 0; i < 10; ++i) {
        a[i] = std::fabs(x[static_cast<std::size_t>(i)]);
    }
    switch (model) {
        case 1: {
            double base = relu(a[0] + a[1] + a[2] + a[3]) + tanh_fn(a[4] + a[5] + a[6]) +
                          gaussian(a[7] + a[8] + a[9]);
            return s3_high1_grouped_outside(a[0], t, 15.0) +
                   std::log(1.0 + base * base) * (t + 1.0);
        }
        case 2: {
            double low = (a[0] + a[1] + a[2] + (a[3] + a[4]) * (t + 1.0)) /
                         (1.0 + std::fabs(x[5] + x[6] + x[7] + x[8] + x[9]) * (t + 1.0) * (t + 1.0));
            return s3_high1_grouped_outside(a[0], t, 15.0) + s3_high2(x[1], t) +
                   s3_high3(a[2], t) + low;
        }
        case 3: {
            double low = std::exp(-(a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3] +
                                    a[4] * a[4]) / 10.0) *
                         (1.0 + (a[5] * a[5] + a[6] * a[6] + a[7] * a[7] + a[8] * a[8] +
                                 a[9] * a[9]) * (t + 1.0));
            return s3_high1_grouped_inside(a[0], t, 15.0) + s3_high2(x[1], t) +
                   s3_high3(a[2], t) - s3_high2(x[3], t) -
                   s3_high1_grouped_inside(a[4], t, 30.0) + low;
        }
    }
    throw ConfigError("s3_model: bad model");
}

}  // namespace

double true_function(const ScenarioSpec& spec, std::span<const double> x, double t) {
    if (static_cast<int>(x.size()) != scenario_dim(spec.scenario)) {
        throw ShapeError("true_function: predictor length does not match scenario dimension");
    }
    switch (spec.scenario) {
        case Scenario::S1: return s1_model(spec.model, x, t);
        case Scenario::S1A: return s1a_model(spec.model, x, t);
        case Scenario::S2: return s2_model(spec.model, x, t);
        case Scenario::S3: return s3_model(spec.model, x, t);
    }
    throw ConfigError("true_function: unknown scenario");
}

Matrix sample_predictors(const ScenarioSpec& spec, std::size_t n, RngStream& rng) {
    const auto d = static_cast<std::size_t>(scenario_dim(spec.scenario));
    switch (spec.xtype) {
        case 1: return sample_uniform_cube(rng, n, d, -1.0, 1.0);
        case 2: return sample_equicorr_normal(rng, n, d, 0.1);
        case 3: return sample_equicorr_normal(rng, n, d, 0.5);
    }
    throw ConfigError("sample_predictors: bad xtype");
}

ScaledSignal estimate_scale_fn(const std::function<double(std::span<const double>, double)>& f,
                               const ScenarioSpec& spec, std::size_t n_mc, RngStream& rng) {
    if (n_mc < 1000) {
        throw ConfigError("estimate_scale: need n_mc >= 1000");
    }
    const auto d = static_cast<std::size_t>(scenario_dim(spec.scenario));
    Matrix x = sample_predictors(spec, n_mc, rng);
    TimeGrid grid = TimeGrid::equispaced(static_cast<std::size_t>(spec.grid_size));
    std::vector<double> var(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        double mean = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < n_mc; ++i) {
            double v = f(std::span<const double>(x.row_ptr(i), d), t);
            double delta = v - mean;
            mean += delta / static_cast<double>(i + 1);
            m2 += delta * (v - mean);
        }
        var[j] = m2 / static_cast<double>(n_mc - 1);
    }
    auto w = riemann_weights(grid, QuadMode::Trapezoid);
    double integrated = quad_integrate(var, w);
    if (!(integrated > 0.0) || !std::isfinite(integrated)) {
        throw NumericError("estimate_scale: integrated variance is degenerate (" +
                           std::to_string(integrated) + ")");
    }
    return ScaledSignal{1.0 / std::sqrt(integrated), n_mc};
}

ScaledSignal estimate_scale(const ScenarioSpec& spec, std::size_t n_mc, RngStream& rng) {
    spec.validate();
    return estimate_scale_fn(
        [&spec](std::span<const double> x, double t) { return true_function(spec, x, t); },
        spec, n_mc, rng);
}

double signal_scale(const ScenarioSpec& spec) {
    using Key = std::tuple<int, int, int, int>;
    static std::map<Key, double> cache;
    static std::mutex mutex;
    Key key{static_cast<int>(spec.scenario), spec.model, spec.xtype, spec.grid_size};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) {
        return it->second;
    }
    // Dedicated seed per combination, independent of replicate seeds.
    std::uint64_t seed = 0xc5a1ed00u + 1000003u * static_cast<std::uint64_t>(std::get<0>(key)) +
                         1009u * static_cast<std::uint64_t>(spec.model) +
                         101u * static_cast<std::uint64_t>(spec.xtype) +
                         static_cast<std::uint64_t>(spec.grid_size);
    RngStream rng(seed);
    double c = estimate_scale(spec, 100000, rng).c;
    cache.emplace(key, c);
    return c;
}

GeneratedData generate_dataset(const ScenarioSpec& spec, RngStream& rng) {
    spec.validate();
    const auto d = static_cast<std::size_t>(scenario_dim(spec.scenario));
    const double c = signal_scale(spec);
    TimeGrid grid = TimeGrid::equispaced(static_cast<std::size_t>(spec.grid_size));

    RngStream x_train_rng = rng.split(1);
    RngStream x_test_rng = rng.split(2);
    RngStream noise_train_rng = rng.split(3);
    RngStream noise_test_rng = rng.split(4);

    auto build = [&](std::size_t n, RngStream& x_rng, RngStream& noise_rng) {
        FunctionalDataset data;
        data.d = static_cast<int>(d);
        Matrix x = sample_predictors(spec, n, x_rng);
        data.samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            FunctionalSample s;
            s.x.assign(x.row_ptr(i), x.row_ptr(i) + d);
            s.grid = grid;
            s.y.resize(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) {
                double signal = c * true_function(spec, s.x, grid[j]);
                s.y[j] = signal + spec.noise_sd * noise_rng.next_normal();
            }
            data.samples.push_back(std::move(s));
        }
        return data;
    };

    GeneratedData out;
    out.signal = ScaledSignal{c, 100000};
    out.train = build(static_cast<std::size_t>(spec.n_train), x_train_rng, noise_train_rng);
    out.test = build(static_cast<std::size_t>(spec.n_test), x_test_rng, noise_test_rng);
    return out;
}

}  // namespace fosdnn
