#pragma once
#include <vector>

#include "fosdnn/quadrature.hpp"

namespace fosdnn {

// One subject: predictor vector, observation grid and the response values
// on that grid. Grids may differ between subjects.
struct FunctionalSample {
    std::vector<double> x;
    TimeGrid grid;
    std::vector<double> y;
};

struct FunctionalDataset {
    std::vector<FunctionalSample> samples;
    int d = 0;

    std::size_t size() const { return samples.size(); }

    // Throws if any sample has mismatched lengths, a different predictor
    // dimension or non-finite values.
    void validate() const;
};

}  // namespace fosdnn
