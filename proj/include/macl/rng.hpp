#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace macl {

// All randomness fans out from one base seed through named streams, so a
// component (init, dropout, synth) can be replayed in isolation.
std::uint64_t stream_seed(std::uint64_t base_seed, std::string_view stream);

// mt19937_64 with hand-rolled real conversions. std::uniform_real_distribution
// is implementation-defined, which would break bitwise reproducibility of
// checkpoints across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t index(std::uint64_t n) {
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace macl
