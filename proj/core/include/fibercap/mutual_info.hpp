#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "fibercap/ripple.hpp"

namespace fibercap {

/// Per-symbol memoryless surrogate channels y = x + n, n circular Gaussian.
enum class Surrogate {
    /// variance N (1 + 6 N kappa S_a^4) for a symbol drawn from level a: the
    /// signal-noise term follows the spread of the level it was drawn from.
    level_spread,
    /// variance N (1 + 6 N kappa S^4) for every symbol, S the total power.
    average_power,
};

Surrogate parse_surrogate(const std::string& name);
std::string to_string(Surrogate s);

struct NoiseLaw {
    double N = 0.0;      // W
    double kappa = 0.0;  // 1/W^2
    Surrogate kind = Surrogate::level_spread;

    double variance(const RippleDistribution& d, std::size_t level) const;
};

struct MIResult {
    double bits = 0.0;
    double stderr_bits = 0.0;
    std::size_t n_samples = 0;
    bool flagged = false;       // stderr above the requested tolerance
};

struct MIOptions {
    unsigned threads = 1;
    double stderr_tol = std::numeric_limits<double>::infinity();
};

/// Monte-Carlo I((level, X); Y) in bits. The level is part of the transmitted
/// symbol, so h(Y | X, level) = sum_a p_a log(pi e sigma_a^2) is exact. Given a
/// level, y is a ring of center rho_a and spread S_a + sigma_a^2, so p(y) is a
/// closed-form Rice mixture; only E[-log p(y)] is sampled. Each draw of
/// (phase, noise) is pushed through every level and weighted by p_a, and the
/// chunk sums are reduced in a fixed order, so the result does not depend on
/// the thread count.
MIResult mi_estimate(const RippleDistribution& d, const NoiseLaw& law, std::size_t n_samples,
                     std::uint64_t seed, const MIOptions& opt = {});

/// log p(y) for the received mixture under `law`; exposed for quadrature checks.
double received_log_density(const RippleDistribution& d, const NoiseLaw& law, double r);

}  // namespace fibercap
