#include "fosdnn/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "fosdnn/errors.hpp"

namespace fosdnn {

void TrainConfig::validate() const {
    if (width < 1 || depth < 2) {
        throw ConfigError("TrainConfig: need width >= 1 and depth >= 2");
    }
    if (alpha < 0.0) {
        throw ConfigError("TrainConfig: alpha must be >= 0");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("TrainConfig: learning_rate must be positive");
    }
    if (batch_size < 1 || epochs < 1) {
        throw ConfigError("TrainConfig: batch_size and epochs must be >= 1");
    }
    if (clip_output && clip_bound != 0.0 && !(clip_bound >= 1.0)) {
        throw ConfigError("TrainConfig: clip_bound must be >= 1 (or 0 for auto)");
    }
}

namespace {

// Rows (x_i, t_ij) for one sample, with quadrature weights on its grid.
struct SampleRows {
    Matrix inputs;
    std::vector<double> targets;
    std::vector<double> qweights;
};

std::vector<SampleRows> flatten_samples(const FunctionalDataset& data, QuadMode mode) {
    std::vector<SampleRows> rows;
    rows.reserve(data.size());
    const std::size_t dim = static_cast<std::size_t>(data.d) + 1;
    for (const auto& s : data.samples) {
        SampleRows r;
        const std::size_t n = s.grid.size();
        r.inputs = Matrix(n, dim);
        r.targets = s.y;
        r.qweights = riemann_weights(s.grid, mode);
        for (std::size_t j = 0; j < n; ++j) {
            double* row = r.inputs.row_ptr(j);
            std::copy(s.x.begin(), s.x.end(), row);
            row[dim - 1] = s.grid[j];
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

Batch assemble_batch(const std::vector<SampleRows>& rows, const std::vector<std::size_t>& idx,
                     std::size_t first, std::size_t count, std::size_t dim) {
    std::size_t total = 0;
    for (std::size_t b = 0; b < count; ++b) {
        total += rows[idx[first + b]].inputs.rows;
    }
    Batch batch;
    batch.inputs = Matrix(total, dim);
    batch.targets.resize(total);
    batch.weights.resize(total);
    const double scale = 1.0 / static_cast<double>(count);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < count; ++b) {
        const SampleRows& r = rows[idx[first + b]];
        std::copy(r.inputs.data.begin(), r.inputs.data.end(),
                  batch.inputs.data.begin() + static_cast<std::ptrdiff_t>(pos * dim));
        for (std::size_t j = 0; j < r.inputs.rows; ++j) {
            batch.targets[pos + j] = r.targets[j];
            batch.weights[pos + j] = r.qweights[j] * scale;
        }
        pos += r.inputs.rows;
    }
    return batch;
}

void shuffle_indices(std::vector<std::size_t>& idx, RngStream& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

struct AdamState {
    NetworkParams m;
    NetworkParams v;
    std::int64_t t = 0;
};

void apply_update(NetworkParams& params, const NetworkParams& grad, const TrainConfig& cfg,
                  AdamState& adam) {
    const std::size_t layers = params.weights.size();
    if (cfg.optimizer == Optimizer::Sgd) {
        for (std::size_t l = 0; l < layers; ++l) {
            for (std::size_t i = 0; i < params.weights[l].data.size(); ++i) {
                params.weights[l].data[i] -= cfg.learning_rate * grad.weights[l].data[i];
            }
            for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
                params.biases[l][i] -= cfg.learning_rate * grad.biases[l][i];
            }
        }
        return;
    }
    adam.t += 1;
    const double b1 = cfg.adam_beta1;
    const double b2 = cfg.adam_beta2;
    const double corr1 = 1.0 - std::pow(b1, static_cast<double>(adam.t));
    const double corr2 = 1.0 - std::pow(b2, static_cast<double>(adam.t));
    auto step = [&](double& p, double g, double& m, double& v) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g * g;
        p -= cfg.learning_rate * (m / corr1) / (std::sqrt(v / corr2) + cfg.adam_epsilon);
    };
    for (std::size_t l = 0; l < layers; ++l) {
        for (std::size_t i = 0; i < params.weights[l].data.size(); ++i) {
            step(params.weights[l].data[i], grad.weights[l].data[i], adam.m.weights[l].data[i],
                 adam.v.weights[l].data[i]);
        }
        for (std::size_t i = 0; i < params.biases[l].size(); ++i) {
            step(params.biases[l][i], grad.biases[l][i], adam.m.biases[l][i],
                 adam.v.biases[l][i]);
        }
    }
}

}  // namespace

double objective(const NetworkParams& params, const FunctionalDataset& data, double alpha,
                 QuadMode mode) {
    if (data.samples.empty()) {
        throw ConfigError("objective: empty dataset");
    }
    data.validate();
    const std::size_t dim = static_cast<std::size_t>(data.d) + 1;
    double total = 0.0;
    Matrix inputs;
    for (const auto& s : data.samples) {
        const std::size_t n = s.grid.size();
        inputs = Matrix(n, dim);
        for (std::size_t j = 0; j < n; ++j) {
            double* row = inputs.row_ptr(j);
            std::copy(s.x.begin(), s.x.end(), row);
            row[dim - 1] = s.grid[j];
        }
        auto out = forward_batch(params, inputs);
        auto w = riemann_weights(s.grid, mode);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double r = s.y[j] - out[j];
            acc += r * r * w[j];
        }
        total += acc;
    }
    return total / static_cast<double>(data.size()) + alpha * squared_norm(params);
}

FittedModel train(const FunctionalDataset& data, const TrainConfig& config) {
    config.validate();
    if (data.samples.empty()) {
        throw ConfigError("train: empty dataset");
    }
    data.validate();

    const std::size_t n = data.size();
    const std::size_t batch_size = std::min<std::size_t>(static_cast<std::size_t>(config.batch_size), n);
    const std::size_t dim = static_cast<std::size_t>(data.d) + 1;
    NetworkShape shape(data.d + 1, config.width, config.depth);

    RngStream root(config.seed);
    RngStream init_rng = root.split(0);
    RngStream shuffle_rng = root.split(1);

    NetworkParams params = init_params(shape, init_rng);
    NetworkParams grad = zero_params(shape);
    AdamState adam{zero_params(shape), zero_params(shape), 0};
    BackpropWorkspace ws(shape);

    auto rows = flatten_samples(data, config.quadrature);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    FittedModel model;
    model.shape = shape;
    model.config = config;
    model.loss_trace.reserve(static_cast<std::size_t>(config.epochs));

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_indices(order, shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t first = 0; first < n; first += batch_size) {
            const std::size_t count = std::min(batch_size, n - first);
            Batch batch = assemble_batch(rows, order, first, count, dim);
            double loss;
            try {
                loss = ws.loss_and_grad(params, batch, config.alpha, grad);
            } catch (const NumericError&) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
            }
            apply_update(params, grad, config, adam);
            epoch_loss += loss;
            ++batches;
        }
        epoch_loss /= static_cast<double>(batches);
        if (!std::isfinite(epoch_loss)) {
            throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
        }
        model.loss_trace.push_back(epoch_loss);
    }

    model.params = std::move(params);
    if (config.clip_output) {
        double bound = config.clip_bound;
        if (bound == 0.0) {
            double max_abs = 0.0;
            for (const auto& s : data.samples) {
                for (double v : s.y) {
                    max_abs = std::max(max_abs, std::fabs(v));
                }
            }
            bound = 1.0 + max_abs;
        }
        model.clip_bound = bound;
    }
    return model;
}

std::vector<double> predict_curve(const FittedModel& model, const std::vector<double>& x,
                                  const TimeGrid& grid) {
    if (static_cast<int>(x.size()) + 1 != model.shape.input_dim) {
        throw ShapeError("predict_curve: predictor length does not match model");
    }
    const std::size_t dim = static_cast<std::size_t>(model.shape.input_dim);
    Matrix inputs(grid.size(), dim);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        double* row = inputs.row_ptr(j);
        std::copy(x.begin(), x.end(), row);
        row[dim - 1] = grid[j];
    }
    auto out = forward_batch(model.params, inputs);
    if (model.clip_bound) {
        for (double& v : out) {
            v = clip(v, *model.clip_bound);
        }
    }
    return out;
}

std::string optimizer_name(Optimizer opt) {
    return opt == Optimizer::Adam ? "adam" : "sgd";
}

Optimizer optimizer_from_name(const std::string& name) {
    if (name == "adam") return Optimizer::Adam;
    if (name == "sgd") return Optimizer::Sgd;
    throw ConfigError("unknown optimizer: " + name);
}

std::string quad_mode_name(QuadMode mode) {
    return mode == QuadMode::PaperLiteral ? "paper-literal" : "trapezoid";
}

QuadMode quad_mode_from_name(const std::string& name) {
    if (name == "paper-literal") return QuadMode::PaperLiteral;
    if (name == "trapezoid") return QuadMode::Trapezoid;
    throw ConfigError("unknown quadrature mode: " + name);
}

namespace {

nlohmann::json config_to_json(const TrainConfig& cfg) {
    return nlohmann::json{{"width", cfg.width},
                          {"depth", cfg.depth},
                          {"alpha", cfg.alpha},
                          {"learning_rate", cfg.learning_rate},
                          {"batch_size", cfg.batch_size},
                          {"epochs", cfg.epochs},
                          {"optimizer", optimizer_name(cfg.optimizer)},
                          {"adam_beta1", cfg.adam_beta1},
                          {"adam_beta2", cfg.adam_beta2},
                          {"adam_epsilon", cfg.adam_epsilon},
                          {"seed", cfg.seed},
                          {"quadrature", quad_mode_name(cfg.quadrature)},
                          {"clip_output", cfg.clip_output},
                          {"clip_bound", cfg.clip_bound}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    cfg.width = j.at("width").get<int>();
    cfg.depth = j.at("depth").get<int>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.epochs = j.at("epochs").get<int>();
    cfg.optimizer = optimizer_from_name(j.at("optimizer").get<std::string>());
    cfg.adam_beta1 = j.at("adam_beta1").get<double>();
    cfg.adam_beta2 = j.at("adam_beta2").get<double>();
    cfg.adam_epsilon = j.at("adam_epsilon").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.quadrature = quad_mode_from_name(j.at("quadrature").get<std::string>());
    cfg.clip_output = j.at("clip_output").get<bool>();
    cfg.clip_bound = j.at("clip_bound").get<double>();
    return cfg;
}

}  // namespace

std::string model_meta_to_json(const FittedModel& model) {
    nlohmann::json doc;
    doc["config"] = config_to_json(model.config);
    doc["loss_trace"] = model.loss_trace;
    if (model.clip_bound) {
        doc["clip_bound"] = *model.clip_bound;
    }
    return doc.dump(2);
}

FittedModel model_from_json(const std::string& params_json, const std::string& meta_json) {
    FittedModel model;
    model.params = params_from_json(params_json);
    model.shape = model.params.shape;
    nlohmann::json meta = nlohmann::json::parse(meta_json);
    model.config = config_from_json(meta.at("config"));
    model.loss_trace = meta.at("loss_trace").get<std::vector<double>>();
    if (meta.contains("clip_bound")) {
        model.clip_bound = meta.at("clip_bound").get<double>();
    }
    return model;
}

}  // namespace fosdnn
