#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fosdnn/dataset.hpp"
#include "fosdnn/network.hpp"

namespace fosdnn {

enum class Optimizer { Adam, Sgd };

struct TrainConfig {
    int width = 32;
    int depth = 6;
    double alpha = 1e-3;
    double learning_rate = 1e-3;
    int batch_size = 64;
    int epochs = 500;
    Optimizer optimizer = Optimizer::Adam;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
    QuadMode quadrature = QuadMode::PaperLiteral;
    bool clip_output = false;
    // 0 means auto: 1 + max |Y| over the training responses.
    double clip_bound = 0.0;

    void validate() const;
};

struct FittedModel {
    NetworkShape shape;
    NetworkParams params;
    TrainConfig config;
    // Mean over minibatches of the batch objective (residual term plus L2
    // penalty), one entry per epoch. For full-batch descent this is the
    // objective at the start of each epoch.
    std::vector<double> loss_trace;
    // Resolved clip bound; empty when clipping is disabled.
    std::optional<double> clip_bound;
};

// (1/n) sum_i sum_j (Y_i(t_ij) - f_theta(X_i, t_ij))^2 w_ij + alpha ||theta||^2
// with w from riemann_weights in the given mode.
double objective(const NetworkParams& params, const FunctionalDataset& data, double alpha,
                 QuadMode mode);

// Minimizes the discretized objective by shuffled minibatch updates over
// samples (each sample contributes its whole curve). Deterministic given
// (data, config.seed).
FittedModel train(const FunctionalDataset& data, const TrainConfig& config);

// Network output along the grid for one predictor vector; applies output
// clipping when the model was trained with it enabled.
std::vector<double> predict_curve(const FittedModel& model, const std::vector<double>& x,
                                  const TimeGrid& grid);

// FittedModel serialization: network JSON plus a {config, loss_trace}
// sidecar document.
std::string model_meta_to_json(const FittedModel& model);
FittedModel model_from_json(const std::string& params_json, const std::string& meta_json);

std::string optimizer_name(Optimizer opt);
Optimizer optimizer_from_name(const std::string& name);
std::string quad_mode_name(QuadMode mode);
QuadMode quad_mode_from_name(const std::string& name);

}  // namespace fosdnn
