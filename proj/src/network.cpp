#include "fosdnn/network.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "fosdnn/errors.hpp"

namespace fosdnn {

NetworkShape::NetworkShape(int input_dim_, int width_, int depth_)
    : input_dim(input_dim_), width(width_), depth(depth_) {
    if (input_dim < 1) {
        throw ConfigError("NetworkShape: input_dim must be >= 1");
    }
    if (width < 1) {
        throw ConfigError("NetworkShape: width must be >= 1");
    }
    if (depth < 2) {
        throw ConfigError("NetworkShape: depth must be >= 2");
    }
}

std::vector<int> NetworkShape::width_vector() const {
    std::vector<int> c(depth);
    c.front() = input_dim;
    c.back() = 1;
    for (int l = 1; l + 1 < depth; ++l) {
        c[l] = width;
    }
    return c;
}

std::int64_t count_params(const NetworkShape& shape) {
    auto c = shape.width_vector();
    std::int64_t total = 0;
    for (std::size_t l = 0; l + 1 < c.size(); ++l) {
        total += static_cast<std::int64_t>(c[l + 1]) * c[l] + c[l + 1];
    }
    return total;
}

bool NetworkParams::same_shape_as(const NetworkParams& other) const {
    return shape.input_dim == other.shape.input_dim && shape.width == other.shape.width &&
           shape.depth == other.shape.depth;
}

bool NetworkParams::all_finite() const {
    for (const auto& w : weights) {
        for (double v : w.data) {
            if (!std::isfinite(v)) return false;
        }
    }
    for (const auto& b : biases) {
        for (double v : b) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

NetworkParams zero_params(const NetworkShape& shape) {
    NetworkParams p;
    p.shape = shape;
    auto c = shape.width_vector();
    for (std::size_t l = 0; l + 1 < c.size(); ++l) {
        p.weights.emplace_back(static_cast<std::size_t>(c[l + 1]), static_cast<std::size_t>(c[l]));
        p.biases.emplace_back(static_cast<std::size_t>(c[l + 1]), 0.0);
    }
    return p;
}

NetworkParams init_params(const NetworkShape& shape, RngStream& rng) {
    NetworkParams p = zero_params(shape);
    for (auto& w : p.weights) {
        double sd = std::sqrt(2.0 / static_cast<double>(w.cols));
        for (double& v : w.data) {
            v = sd * rng.next_normal();
        }
    }
    return p;
}

std::vector<double> flatten(const NetworkParams& params) {
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(params.flat_size()));
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        theta.insert(theta.end(), params.weights[l].data.begin(), params.weights[l].data.end());
        theta.insert(theta.end(), params.biases[l].begin(), params.biases[l].end());
    }
    return theta;
}

NetworkParams unflatten(const NetworkShape& shape, const std::vector<double>& theta) {
    if (static_cast<std::int64_t>(theta.size()) != count_params(shape)) {
        throw ShapeError("unflatten: flat vector length does not match shape");
    }
    NetworkParams p = zero_params(shape);
    std::size_t pos = 0;
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        for (double& v : p.weights[l].data) {
            v = theta[pos++];
        }
        for (double& v : p.biases[l]) {
            v = theta[pos++];
        }
    }
    return p;
}

double squared_norm(const NetworkParams& params) {
    double s = 0.0;
    for (const auto& w : params.weights) {
        for (double v : w.data) s += v * v;
    }
    for (const auto& b : params.biases) {
        for (double v : b) s += v * v;
    }
    return s;
}

double forward(const NetworkParams& params, std::span<const double> z) {
    if (static_cast<int>(z.size()) != params.shape.input_dim) {
        throw ShapeError("forward: input length does not match input_dim");
    }
    const int layers = params.shape.num_layers();
    std::vector<double> cur(z.begin(), z.end());
    std::vector<double> next;
    for (int l = 0; l < layers; ++l) {
        const Matrix& w = params.weights[static_cast<std::size_t>(l)];
        const auto& b = params.biases[static_cast<std::size_t>(l)];
        next.assign(w.rows, 0.0);
        for (std::size_t j = 0; j < w.rows; ++j) {
            double acc = b[j];
            const double* wr = w.row_ptr(j);
            for (std::size_t k = 0; k < w.cols; ++k) {
                acc += wr[k] * cur[k];
            }
            next[j] = (l + 1 < layers && acc < 0.0) ? 0.0 : acc;
        }
        cur.swap(next);
    }
    return cur[0];
}

namespace {

// out (m x c_out) = a (m x c_in) * w^T + bias, optionally ReLU'd. Uses a
// transposed weight copy so the inner loop is a contiguous axpy; the per
// element accumulation order (bias first, then k ascending) matches the
// scalar forward exactly.
void affine_forward(const Matrix& a, const Matrix& wt, const std::vector<double>& bias,
                    bool relu, Matrix& out) {
    const std::size_t m = a.rows;
    const std::size_t c_in = a.cols;
    const std::size_t c_out = wt.cols;
    for (std::size_t i = 0; i < m; ++i) {
        double* orow = out.row_ptr(i);
        const double* arow = a.row_ptr(i);
        for (std::size_t j = 0; j < c_out; ++j) {
            orow[j] = bias[j];
        }
        for (std::size_t k = 0; k < c_in; ++k) {
            const double av = arow[k];
            const double* wtrow = wt.row_ptr(k);
            for (std::size_t j = 0; j < c_out; ++j) {
                orow[j] += av * wtrow[j];
            }
        }
        if (relu) {
            for (std::size_t j = 0; j < c_out; ++j) {
                if (orow[j] < 0.0) orow[j] = 0.0;
            }
        }
    }
}

Matrix transpose(const Matrix& w) {
    Matrix t(w.cols, w.rows);
    for (std::size_t i = 0; i < w.rows; ++i) {
        for (std::size_t j = 0; j < w.cols; ++j) {
            t(j, i) = w(i, j);
        }
    }
    return t;
}

}  // namespace

std::vector<double> forward_batch(const NetworkParams& params, const Matrix& z) {
    if (static_cast<int>(z.cols) != params.shape.input_dim) {
        throw ShapeError("forward_batch: input width does not match input_dim");
    }
    const int layers = params.shape.num_layers();
    Matrix cur = z;
    Matrix next;
    for (int l = 0; l < layers; ++l) {
        const auto lu = static_cast<std::size_t>(l);
        Matrix wt = transpose(params.weights[lu]);
        next = Matrix(cur.rows, params.weights[lu].rows);
        affine_forward(cur, wt, params.biases[lu], l + 1 < layers, next);
        cur = std::move(next);
    }
    std::vector<double> out(cur.rows);
    for (std::size_t i = 0; i < cur.rows; ++i) {
        out[i] = cur(i, 0);
    }
    return out;
}

double clip(double value, double bound) {
    if (!(bound >= 1.0)) {
        throw ConfigError("clip: bound must satisfy F >= 1");
    }
    return std::min(std::max(value, -bound), bound);
}

BackpropWorkspace::BackpropWorkspace(const NetworkShape& shape) : shape_(shape) {}

void BackpropWorkspace::ensure_capacity(const NetworkParams& params, std::size_t m) {
    const auto layers = params.weights.size();
    activations_.assign(layers, Matrix());
    preacts_.assign(layers, Matrix());
    weights_t_.assign(layers, Matrix());
    for (std::size_t l = 0; l < layers; ++l) {
        activations_[l] = Matrix(m, params.weights[l].cols);
        preacts_[l] = Matrix(m, params.weights[l].rows);
        weights_t_[l] = transpose(params.weights[l]);
    }
}

double BackpropWorkspace::loss_only(const NetworkParams& params, const Batch& batch,
                                    double alpha) {
    auto out = forward_batch(params, batch.inputs);
    double loss = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double r = out[i] - batch.targets[i];
        loss += batch.weights[i] * r * r;
    }
    return loss + alpha * squared_norm(params);
}

double BackpropWorkspace::loss_and_grad(const NetworkParams& params, const Batch& batch,
                                        double alpha, NetworkParams& grad) {
    const std::size_t m = batch.inputs.rows;
    if (static_cast<int>(batch.inputs.cols) != params.shape.input_dim) {
        throw ShapeError("loss_and_grad: input width does not match input_dim");
    }
    if (batch.targets.size() != m || batch.weights.size() != m) {
        throw ShapeError("loss_and_grad: targets/weights do not match batch rows");
    }
    const auto layers = params.weights.size();
    ensure_capacity(params, m);

    // Forward, storing layer inputs and pre-activations.
    activations_[0] = batch.inputs;
    for (std::size_t l = 0; l < layers; ++l) {
        affine_forward(activations_[l], weights_t_[l], params.biases[l], false, preacts_[l]);
        if (l + 1 < layers) {
            Matrix& act = activations_[l + 1];
            const Matrix& pre = preacts_[l];
            for (std::size_t idx = 0; idx < pre.data.size(); ++idx) {
                act.data[idx] = pre.data[idx] > 0.0 ? pre.data[idx] : 0.0;
            }
        }
    }

    double loss = 0.0;
    delta_ = Matrix(m, 1);
    const Matrix& out = preacts_[layers - 1];
    for (std::size_t i = 0; i < m; ++i) {
        double r = out(i, 0) - batch.targets[i];
        loss += batch.weights[i] * r * r;
        delta_(i, 0) = 2.0 * batch.weights[i] * r;
    }
    loss += alpha * squared_norm(params);

    // Backward. delta_ holds dL/d(preact of layer l).
    for (std::size_t l = layers; l-- > 0;) {
        Matrix& dw = grad.weights[l];
        auto& db = grad.biases[l];
        dw.fill(0.0);
        std::fill(db.begin(), db.end(), 0.0);
        const Matrix& a = activations_[l];
        for (std::size_t i = 0; i < m; ++i) {
            const double* drow = delta_.row_ptr(i);
            const double* arow = a.row_ptr(i);
            for (std::size_t j = 0; j < dw.rows; ++j) {
                const double g = drow[j];
                if (g == 0.0) continue;
                db[j] += g;
                double* dwrow = dw.row_ptr(j);
                for (std::size_t k = 0; k < dw.cols; ++k) {
                    dwrow[k] += g * arow[k];
                }
            }
        }
        if (l > 0) {
            const Matrix& w = params.weights[l];
            const Matrix& pre = preacts_[l - 1];
            delta_next_ = Matrix(m, w.cols);
            for (std::size_t i = 0; i < m; ++i) {
                double* nrow = delta_next_.row_ptr(i);
                const double* drow = delta_.row_ptr(i);
                for (std::size_t j = 0; j < w.rows; ++j) {
                    const double g = drow[j];
                    if (g == 0.0) continue;
                    const double* wrow = w.row_ptr(j);
                    for (std::size_t k = 0; k < w.cols; ++k) {
                        nrow[k] += g * wrow[k];
                    }
                }
                const double* prow = pre.row_ptr(i);
                for (std::size_t k = 0; k < w.cols; ++k) {
                    if (!(prow[k] > 0.0)) nrow[k] = 0.0;
                }
            }
            delta_ = std::move(delta_next_);
        }
    }

    if (alpha != 0.0) {
        for (std::size_t l = 0; l < layers; ++l) {
            for (std::size_t idx = 0; idx < params.weights[l].data.size(); ++idx) {
                grad.weights[l].data[idx] += 2.0 * alpha * params.weights[l].data[idx];
            }
            for (std::size_t j = 0; j < params.biases[l].size(); ++j) {
                grad.biases[l][j] += 2.0 * alpha * params.biases[l][j];
            }
        }
    }
    if (!std::isfinite(loss)) {
        throw NumericError("loss_and_grad: non-finite loss");
    }
    return loss;
}

double batch_loss(const NetworkParams& params, const Batch& batch, double alpha) {
    BackpropWorkspace ws(params.shape);
    return ws.loss_only(params, batch, alpha);
}

NetworkParams grad_loss(const NetworkParams& params, const Batch& batch, double alpha) {
    if (alpha < 0.0) {
        throw ConfigError("grad_loss: alpha must be >= 0");
    }
    NetworkParams grad = zero_params(params.shape);
    BackpropWorkspace ws(params.shape);
    ws.loss_and_grad(params, batch, alpha, grad);
    return grad;
}

std::string params_to_json(const NetworkParams& params) {
    nlohmann::json doc;
    doc["shape"] = {{"d", params.shape.input_dim - 1},
                    {"W", params.shape.width},
                    {"L", params.shape.depth}};
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        nlohmann::json layer;
        layer["weights"] = params.weights[l].data;
        layer["bias"] = params.biases[l];
        layers.push_back(std::move(layer));
    }
    doc["layers"] = std::move(layers);
    return doc.dump(2);
}

NetworkParams params_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    NetworkShape shape(doc.at("shape").at("d").get<int>() + 1,
                       doc.at("shape").at("W").get<int>(),
                       doc.at("shape").at("L").get<int>());
    NetworkParams p = zero_params(shape);
    const auto& layers = doc.at("layers");
    if (layers.size() != p.weights.size()) {
        throw ShapeError("params_from_json: layer count does not match shape");
    }
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
        auto w = layers[l].at("weights").get<std::vector<double>>();
        auto b = layers[l].at("bias").get<std::vector<double>>();
        if (w.size() != p.weights[l].data.size() || b.size() != p.biases[l].size()) {
            throw ShapeError("params_from_json: layer " + std::to_string(l) +
                             " size does not match shape");
        }
        p.weights[l].data = std::move(w);
        p.biases[l] = std::move(b);
    }
    if (!p.all_finite()) {
        throw NumericError("params_from_json: non-finite parameter");
    }
    return p;
}

}  // namespace fosdnn
