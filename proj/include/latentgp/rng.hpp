#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "latentgp/common.hpp"
#include "latentgp/normal_dist.hpp"

namespace latentgp {

// splitmix64 finalizer, used for seed expansion and substream derivation.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Named substreams hung off the single run seed: fit, ensemble, LOO and grid
// randomness stay independent, and indexed work items (replicates, ensemble
// members, folds) can be drawn in any order or in parallel without changing
// the result.
enum class Stream : std::uint64_t {
    Fit = 1,
    Likelihood = 2,
    Ensemble = 3,
    Loo = 4,
    Grid = 5,
    Abc = 6,
    Design = 7,
    Test = 99,
};

inline std::uint64_t substream_seed(std::uint64_t seed, Stream s, std::uint64_t index = 0) {
    std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(s)));
    return mix64(h ^ mix64(index));
}

// All library randomness flows through this wrapper. mt19937_64 is pinned by
// the standard and the uniform/normal/gamma transforms below avoid the
// implementation-defined std:: distributions, so every stream reproduces
// bit-for-bit across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix64(seed ^ 0xd1b54a32d192ed03ULL)) {}

    // Uniform on the open interval (0,1); never exactly 0 or 1, so the value
    // is always safe to push through an inverse cdf.
    double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via inverse cdf.
    double normal() { return inv_std_normal_cdf(uniform()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Index in [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n) {
        const auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    // Gamma(shape, 1) by Marsaglia-Tsang, boosted below shape 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw ArgumentError("Rng::gamma: shape must be positive");
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Inverse-gamma(shape, scale): density scale^shape/Gamma(shape) x^-(shape+1) exp(-scale/x).
    double inverse_gamma(double shape, double scale) { return scale / gamma(shape); }

private:
    std::mt19937_64 gen_;
};

}  // namespace latentgp
