#pragma once

#include <cstdint>
#include <random>

namespace qprobe {

// Single ordered stream of pseudo-randomness. Every consumer (weight init,
// exploration, replay sampling) draws from one instance in a fixed order, so
// a fixed seed reproduces a run bit for bit. Draws are derived from the raw
// mt19937_64 output instead of std::uniform_*_distribution, whose results
// are implementation defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer in [0, n).
    int uniform_int(int n) {
        int v = static_cast<int>(uniform() * static_cast<double>(n));
        return v < n ? v : n - 1;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace qprobe
