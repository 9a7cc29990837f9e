#pragma once

#include <cstdint>

namespace eustar {

/// Counter-based uniform bit generator built on the SplitMix64 mixer.
/// Output i of stream (seed, block) is a pure function of (seed, block, i),
/// so parallel evaluation per block and serial evaluation agree bit for bit.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t block = 0)
        : state_(mix(seed ^ (block * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform draw in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw via the inverse CDF.
    double next_normal();

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Inverse standard normal CDF (Wichura's PPND16), |error| < 1e-15 for
/// u in (0, 1).
double inverse_normal_cdf(double u);

}  // namespace eustar
