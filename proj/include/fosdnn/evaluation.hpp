#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "fosdnn/baseline.hpp"
#include "fosdnn/scenarios.hpp"
#include "fosdnn/training.hpp"

namespace fosdnn {

// Per-replicate MISPEs with their mean and sample standard deviation.
struct MispeReport {
    std::vector<double> per_replicate;
    double mean = 0.0;
    double stddev = 0.0;
    std::string method;
    std::string spec_label;

    static MispeReport from_values(std::vector<double> values, std::string method,
                                   std::string spec_label);
};

double mean_of(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);

// (1/N) sum_i sum_j (Y_i(t_j) - pred_i(t_j))^2 * dt with constant dt.
double mispe(const std::vector<std::vector<double>>& predictions, const FunctionalDataset& test,
             double dt);

struct CvRow {
    int width = 0;
    int depth = 0;
    double alpha = 0.0;
    double mean_loss = 0.0;
    double std_loss = 0.0;
};

struct CvTable {
    std::vector<CvRow> rows;
    std::size_t selected = 0;
};

// Minimal mean loss; ties broken by smallest parameter count, then smallest
// alpha. d is the predictor dimension (for the parameter count).
std::size_t select_cv_row(const std::vector<CvRow>& rows, int d);

// Shuffled partition into k folds whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k,
                                                      RngStream& rng);

// Held-out MISPE per (config, fold); CV loss is the fold mean.
CvTable kfold_cv(const FunctionalDataset& data, const std::vector<TrainConfig>& grid,
                 std::size_t k, RngStream& rng, double dt = 0.01);

enum class Method { FosDnn, Linear };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct LinearConfig {
    int k = 15;
    double lambda = 1e-3;
};

// Fresh train/test generation, fit and MISPE per replicate, each on a split
// substream; aggregation is by replicate index.
MispeReport replicate_experiment(const ScenarioSpec& spec, Method method,
                                 const TrainConfig& dnn_config, const LinearConfig& linear_config,
                                 int reps, RngStream& rng, double dt = 0.01);

struct RatePoint {
    int n = 0;
    double mean_mispe = 0.0;
    double excess = 0.0;  // mean_mispe - noise floor
    bool dropped = false;
};

struct RateResult {
    std::vector<RatePoint> points;
    double slope = 0.0;
    std::vector<std::string> warnings;
};

// Least-squares slope of log(excess) against log(n).
double fit_rate_slope(const std::vector<std::pair<double, double>>& n_and_excess);

// Mean MISPE per sample size with the noise floor (noise_sd^2) subtracted
// before the log-log fit; non-positive excesses are dropped with a warning.
RateResult rate_probe(const ScenarioSpec& spec, const std::vector<int>& n_list, Method method,
                      const TrainConfig& dnn_config, const LinearConfig& linear_config, int reps,
                      RngStream& rng, double dt = 0.01);

// Serialization: report JSON and an aligned-column text table.
std::string mispe_report_to_json(const MispeReport& report);
std::string mispe_report_to_text(const MispeReport& report);
std::string cv_table_to_json(const CvTable& table);
std::string cv_table_to_text(const CvTable& table);
std::string rate_result_to_json(const RateResult& result);

}  // namespace fosdnn
