#pragma once
#include <optional>
#include <string>
#include <vector>

#include "fosdnn/dataset.hpp"

namespace fosdnn {

// On-disk dataset layout: a long-format response CSV (sample_id,t,y), a wide
// covariate CSV (sample_id,x1,...,xd or named columns), and an optional
// metadata JSON {d, n, grid}.
struct DatasetFiles {
    std::string responses;
    std::string covariates;
    std::optional<std::string> metadata;
};

// Sample order follows first appearance in the covariate file. Each sample's
// response rows must appear with strictly increasing t. With normalize set,
// covariate columns are shifted/scaled to zero mean and unit variance;
// constant columns are left untouched with a warning. Warnings go to the
// provided sink, or stderr when none is given.
FunctionalDataset load_dataset(const DatasetFiles& files, bool normalize,
                               std::vector<std::string>* warnings = nullptr);

// Inverse of load_dataset; numeric fields are written with 17 significant
// digits so the round trip is value-exact. Output files are written
// atomically (temp file + rename).
void save_dataset(const FunctionalDataset& data, const DatasetFiles& files);

// Deterministic 17-significant-digit decimal rendering of a double.
std::string format_double(double v);

void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace fosdnn
