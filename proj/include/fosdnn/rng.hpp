#pragma once
#include <cstdint>

namespace fosdnn {

// Counter-based 64-bit generator (splitmix64 core). Same seed gives the
// same draw sequence on every platform. split(index) derives a child
// stream from the current state without advancing the parent, so
// replicates, CV folds and Monte Carlo oracles each get an independent
// reproducible stream.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit mantissa.
    double next_double();

    // Uniform on [lo, hi).
    double next_uniform(double lo, double hi);

    // Standard normal via Box-Muller; the spare deviate is cached, so the
    // stream stays deterministic under copying (the spare is part of the
    // value state).
    double next_normal();

    RngStream split(std::uint64_t index) const;

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fosdnn
