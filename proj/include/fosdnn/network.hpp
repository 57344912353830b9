#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fosdnn/linalg.hpp"
#include "fosdnn/rng.hpp"

namespace fosdnn {

// Dense ReLU multilayer perceptron mapping (x_1, ..., x_d, t) to a scalar.
// The width vector is (c_1, ..., c_L) with c_1 = input_dim, c_L = 1 and
// c_l = width in between; layer l is the affine map c_l -> c_{l+1}, so a
// depth-L network has L-1 affine maps. This convention reproduces the
// published parameter counts (4641 for d=10, 5121 for d=25 at W=32, L=7).
struct NetworkShape {
    int input_dim = 0;  // D = d + 1
    int width = 0;      // W
    int depth = 0;      // L

    NetworkShape() = default;
    NetworkShape(int input_dim_, int width_, int depth_);

    std::vector<int> width_vector() const;
    int num_layers() const { return depth - 1; }
};

std::int64_t count_params(const NetworkShape& shape);

// Per-layer weight matrices (c_{l+1} x c_l, row-major) and bias vectors.
struct NetworkParams {
    NetworkShape shape;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::int64_t flat_size() const { return count_params(shape); }
    bool same_shape_as(const NetworkParams& other) const;
    bool all_finite() const;
};

// Zero-initialized parameters of the given shape.
NetworkParams zero_params(const NetworkShape& shape);

// Weights from a zero-mean normal scaled by fan-in (variance 2/fan_in),
// biases zero. Deterministic given the stream.
NetworkParams init_params(const NetworkShape& shape, RngStream& rng);

// Canonical flat order: per layer, weights row-major then bias.
std::vector<double> flatten(const NetworkParams& params);
NetworkParams unflatten(const NetworkShape& shape, const std::vector<double>& theta);

double squared_norm(const NetworkParams& params);

double forward(const NetworkParams& params, std::span<const double> z);

// Vectorized forward over the rows of Z (m x input_dim). Accumulation order
// per output matches the scalar path.
std::vector<double> forward_batch(const NetworkParams& params, const Matrix& z);

// min(max(value, -F), F); the bound must satisfy F >= 1.
double clip(double value, double bound);

// One flattened minibatch: rows of inputs with per-row targets and
// quadrature weights (the caller folds any 1/n scaling into the weights).
struct Batch {
    Matrix inputs;                 // m x input_dim
    std::vector<double> targets;   // m
    std::vector<double> weights;   // m
};

// sum_k w_k (f(z_k) - y_k)^2 + alpha * ||theta||^2
double batch_loss(const NetworkParams& params, const Batch& batch, double alpha);

// Exact reverse-mode gradient of batch_loss. The ReLU subgradient at 0 is
// taken as 0.
NetworkParams grad_loss(const NetworkParams& params, const Batch& batch, double alpha);

// Scratch buffers reused across minibatch steps; loss_and_grad is the fused
// path the trainer iterates.
class BackpropWorkspace {
public:
    explicit BackpropWorkspace(const NetworkShape& shape);

    // Computes batch_loss and accumulates its gradient into `grad` (which is
    // reset first). Returns the loss.
    double loss_and_grad(const NetworkParams& params, const Batch& batch, double alpha,
                         NetworkParams& grad);

    double loss_only(const NetworkParams& params, const Batch& batch, double alpha);

private:
    void ensure_capacity(const NetworkParams& params, std::size_t m);

    NetworkShape shape_;
    std::vector<Matrix> activations_;  // per layer input, m x c_l
    std::vector<Matrix> preacts_;      // per layer output before ReLU
    std::vector<Matrix> weights_t_;    // transposed weights, c_l x c_{l+1}
    Matrix delta_;
    Matrix delta_next_;
};

// JSON document {shape: {d, W, L}, layers: [{weights, bias}, ...]} with
// round-trip-exact decimal floats. d = input_dim - 1.
std::string params_to_json(const NetworkParams& params);
NetworkParams params_from_json(const std::string& text);

}  // namespace fosdnn
