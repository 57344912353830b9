#include "fosdnn/dataset.hpp"

#include <cmath>
#include <string>

#include "fosdnn/errors.hpp"

namespace fosdnn {

void FunctionalDataset::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const std::string tag = "sample " + std::to_string(i);
        if (static_cast<int>(s.x.size()) != d) {
            throw ShapeError("FunctionalDataset: " + tag + " has predictor dimension " +
                             std::to_string(s.x.size()) + ", expected " + std::to_string(d));
        }
        if (s.grid.size() != s.y.size() || s.y.empty()) {
            throw ShapeError("FunctionalDataset: " + tag +
                             " grid/response lengths mismatch or empty");
        }
        for (double v : s.x) {
            if (!std::isfinite(v)) throw NumericError("FunctionalDataset: " + tag + " has non-finite predictor");
        }
        for (double v : s.y) {
            if (!std::isfinite(v)) throw NumericError("FunctionalDataset: " + tag + " has non-finite response");
        }
    }
}

}  // namespace fosdnn
