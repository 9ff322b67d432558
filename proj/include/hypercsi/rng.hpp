#pragma once

#include <cstdint>
#include <random>

namespace hypercsi {

// Deterministic random source. The engine's output sequence is pinned by the
// standard; the transforms below are implemented here rather than taken from
// <random> so identical seeds give identical streams on every toolchain.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t bits() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double uniform_open() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    // uniform integer in [0, n), unbiased
    uint64_t below(uint64_t n);

    // standard normal (Box-Muller)
    double normal();

    // Gamma(shape, 1) via the Marsaglia-Tsang squeeze; shape > 0
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
};

}  // namespace hypercsi
