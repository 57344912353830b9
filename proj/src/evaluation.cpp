#include "fosdnn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "fosdnn/errors.hpp"

namespace fosdnn {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

MispeReport MispeReport::from_values(std::vector<double> values, std::string method,
                                     std::string spec_label) {
    MispeReport r;
    r.per_replicate = std::move(values);
    r.mean = mean_of(r.per_replicate);
    r.stddev = sample_stddev(r.per_replicate);
    r.method = std::move(method);
    r.spec_label = std::move(spec_label);
    return r;
}

double mispe(const std::vector<std::vector<double>>& predictions, const FunctionalDataset& test,
             double dt) {
    if (!(dt > 0.0)) {
        throw ConfigError("mispe: dt must be positive");
    }
    if (predictions.size() != test.size()) {
        throw ShapeError("mispe: prediction count does not match test size");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto& s = test.samples[i];
        const auto& p = predictions[i];
        if (p.size() != s.y.size()) {
            throw ShapeError("mispe: curve length mismatch at sample " + std::to_string(i));
        }
        double acc = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            double r = s.y[j] - p[j];
            acc += r * r;
        }
        total += acc * dt;
    }
    return total / static_cast<double>(test.size());
}

std::size_t select_cv_row(const std::vector<CvRow>& rows, int d) {
    if (rows.empty()) {
        throw ConfigError("select_cv_row: empty table");
    }
    std::size_t best = 0;
    auto params_of = [d](const CvRow& r) {
        return count_params(NetworkShape(d + 1, r.width, r.depth));
    };
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CvRow& cand = rows[i];
        const CvRow& cur = rows[best];
        if (cand.mean_loss < cur.mean_loss) {
            best = i;
        } else if (cand.mean_loss == cur.mean_loss) {
            auto pc = params_of(cand), pb = params_of(cur);
            if (pc < pb || (pc == pb && cand.alpha < cur.alpha)) {
                best = i;
            }
        }
    }
    return best;
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t k,
                                                      RngStream& rng) {
    if (k < 2) {
        throw ConfigError("kfold_partition: need k >= 2");
    }
    if (n < k) {
        throw ConfigError("kfold_partition: need n >= k");
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        std::size_t size = n / k + (f < n % k ? 1 : 0);
        folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                        idx.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

namespace {

FunctionalDataset subset(const FunctionalDataset& data, const std::vector<std::size_t>& keep) {
    FunctionalDataset out;
    out.d = data.d;
    out.samples.reserve(keep.size());
    for (std::size_t i : keep) {
        out.samples.push_back(data.samples[i]);
    }
    return out;
}

double heldout_mispe_dnn(const FittedModel& model, const FunctionalDataset& test, double dt) {
    std::vector<std::vector<double>> preds;
    preds.reserve(test.size());
    for (const auto& s : test.samples) {
        preds.push_back(predict_curve(model, s.x, s.grid));
    }
    return mispe(preds, test, dt);
}

double heldout_mispe_linear(const LinearFosModel& model, const FunctionalDataset& test,
                            double dt) {
    std::vector<std::vector<double>> preds;
    preds.reserve(test.size());
    for (const auto& s : test.samples) {
        preds.push_back(predict_linear(model, s.x, s.grid));
    }
    return mispe(preds, test, dt);
}

}  // namespace

CvTable kfold_cv(const FunctionalDataset& data, const std::vector<TrainConfig>& grid,
                 std::size_t k, RngStream& rng, double dt) {
    if (grid.empty()) {
        throw ConfigError("kfold_cv: empty config grid");
    }
    data.validate();
    RngStream part_rng = rng.split(0);
    auto folds = kfold_partition(data.size(), k, part_rng);

    // All-but-fold index lists.
    std::vector<std::vector<std::size_t>> train_idx(k);
    for (std::size_t f = 0; f < k; ++f) {
        for (std::size_t g = 0; g < k; ++g) {
            if (g == f) continue;
            train_idx[f].insert(train_idx[f].end(), folds[g].begin(), folds[g].end());
        }
    }

    CvTable table;
    table.rows.reserve(grid.size());
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        std::vector<double> losses;
        losses.reserve(k);
        for (std::size_t f = 0; f < k; ++f) {
            TrainConfig cfg = grid[ci];
            cfg.seed = rng.split(1 + ci * k + f).next_u64();
            FittedModel model = train(subset(data, train_idx[f]), cfg);
            losses.push_back(heldout_mispe_dnn(model, subset(data, folds[f]), dt));
        }
        CvRow row;
        row.width = grid[ci].width;
        row.depth = grid[ci].depth;
        row.alpha = grid[ci].alpha;
        row.mean_loss = mean_of(losses);
        row.std_loss = sample_stddev(losses);
        table.rows.push_back(row);
    }
    table.selected = select_cv_row(table.rows, data.d);
    return table;
}

std::string method_name(Method m) {
    return m == Method::FosDnn ? "fosdnn" : "linear";
}

Method method_from_name(const std::string& name) {
    if (name == "fosdnn") return Method::FosDnn;
    if (name == "linear" || name == "fosr") return Method::Linear;
    throw ConfigError("unknown method: " + name + " (expected fosdnn or linear)");
}

MispeReport replicate_experiment(const ScenarioSpec& spec, Method method,
                                 const TrainConfig& dnn_config, const LinearConfig& linear_config,
                                 int reps, RngStream& rng, double dt) {
    if (reps < 1) {
        throw ConfigError("replicate_experiment: need reps >= 1");
    }
    spec.validate();
    std::vector<double> values(static_cast<std::size_t>(reps), 0.0);
    for (int r = 0; r < reps; ++r) {
        RngStream rep_rng = rng.split(static_cast<std::uint64_t>(r));
        try {
            GeneratedData data = generate_dataset(spec, rep_rng);
            if (method == Method::FosDnn) {
                TrainConfig cfg = dnn_config;
                cfg.seed = rep_rng.split(100).next_u64();
                FittedModel model = train(data.train, cfg);
                values[static_cast<std::size_t>(r)] = heldout_mispe_dnn(model, data.test, dt);
            } else {
                LinearFosModel model =
                    fit_linear_fos(data.train, linear_config.k, linear_config.lambda);
                values[static_cast<std::size_t>(r)] = heldout_mispe_linear(model, data.test, dt);
            }
        } catch (const Error& e) {
            throw NumericError("replicate " + std::to_string(r) + ": " + e.what());
        }
    }
    return MispeReport::from_values(std::move(values), method_name(method), spec.label());
}

double fit_rate_slope(const std::vector<std::pair<double, double>>& n_and_excess) {
    if (n_and_excess.size() < 2) {
        throw NumericError("fit_rate_slope: need at least 2 points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(n_and_excess.size());
    for (const auto& [n, e] : n_and_excess) {
        double lx = std::log(n);
        double ly = std::log(e);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = m * sxx - sx * sx;
    if (denom == 0.0) {
        throw NumericError("fit_rate_slope: degenerate sample sizes");
    }
    return (m * sxy - sx * sy) / denom;
}

RateResult rate_probe(const ScenarioSpec& spec, const std::vector<int>& n_list, Method method,
                      const TrainConfig& dnn_config, const LinearConfig& linear_config, int reps,
                      RngStream& rng, double dt) {
    if (n_list.size() < 2) {
        throw ConfigError("rate_probe: need at least 2 sample sizes");
    }
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw ConfigError("rate_probe: sample sizes must be strictly increasing");
        }
    }
    const double floor = spec.noise_sd * spec.noise_sd;
    RateResult result;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        ScenarioSpec s = spec;
        s.n_train = n_list[i];
        RngStream sub = rng.split(i);
        MispeReport rep = replicate_experiment(s, method, dnn_config, linear_config, reps, sub, dt);
        RatePoint point;
        point.n = n_list[i];
        point.mean_mispe = rep.mean;
        point.excess = rep.mean - floor;
        if (point.excess <= 0.0) {
            point.dropped = true;
            result.warnings.push_back("n = " + std::to_string(point.n) +
                                      ": excess error is non-positive; point dropped");
        } else {
            pts.emplace_back(static_cast<double>(point.n), point.excess);
        }
        result.points.push_back(point);
    }
    // All excesses identical means a flat series: slope 0 by definition.
    result.slope = fit_rate_slope(pts);
    return result;
}

std::string mispe_report_to_json(const MispeReport& report) {
    nlohmann::json doc;
    doc["method"] = report.method;
    doc["spec"] = report.spec_label;
    doc["per_replicate"] = report.per_replicate;
    doc["mean"] = report.mean;
    doc["std"] = report.stddev;
    return doc.dump(2);
}

std::string mispe_report_to_text(const MispeReport& report) {
    char line[256];
    std::string out = "spec        method      MISPE mean (std)    reps\n";
    std::snprintf(line, sizeof(line), "%-11s %-11s %.3f (%.3f)       %zu\n",
                  report.spec_label.c_str(), report.method.c_str(), report.mean, report.stddev,
                  report.per_replicate.size());
    out += line;
    return out;
}

std::string cv_table_to_json(const CvTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"W", r.width},
                        {"L", r.depth},
                        {"alpha", r.alpha},
                        {"mean", r.mean_loss},
                        {"std", r.std_loss}});
    }
    nlohmann::json doc;
    doc["rows"] = std::move(rows);
    doc["selected"] = table.selected;
    return doc.dump(2);
}

std::string cv_table_to_text(const CvTable& table) {
    std::string out = "   W   L      alpha   mean (std)\n";
    char line[160];
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        std::snprintf(line, sizeof(line), "%4d %3d %10.1e   %.3f (%.3f)%s\n", r.width, r.depth,
                      r.alpha, r.mean_loss, r.std_loss, i == table.selected ? "  <- selected" : "");
        out += line;
    }
    return out;
}

std::string rate_result_to_json(const RateResult& result) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : result.points) {
        pts.push_back({{"n", p.n},
                       {"mean_mispe", p.mean_mispe},
                       {"excess", p.excess},
                       {"dropped", p.dropped}});
    }
    nlohmann::json doc;
    doc["points"] = std::move(pts);
    doc["slope"] = result.slope;
    doc["warnings"] = result.warnings;
    return doc.dump(2);
}

}  // namespace fosdnn
