#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fibercap/coupling.hpp"
#include "fibercap/mutual_info.hpp"
#include "fibercap/ripple.hpp"

namespace fibercap {

struct NelderMeadOptions {
    int max_evals = 1000;
    double f_tol = 1e-10;  // relative spread of simplex values
    double x_tol = 1e-8;   // simplex diameter
    double initial_step = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Minimizes f by the Nelder-Mead simplex method.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt = {});

/// Unconstrained coordinates for a q-level ripple of power S:
/// [weight logits (q), log(S_a / S) (q), rho_a / sqrt(S) (q)].
/// Decoding uses softmax weights and exp variances, then rescales the ring
/// centers (or, if the spreads alone exceed S, the spreads) so the second
/// moment equals S exactly.
RippleDistribution decode_ripple(const std::vector<double>& theta, std::size_t q, double S);
std::vector<double> encode_ripple(const RippleDistribution& d, double S);

/// Adds zero-ish levels (weight `eps`) until d has q levels.
RippleDistribution pad_levels(const RippleDistribution& d, std::size_t q, double eps = 1e-6);

struct OptimizeOptions {
    int budget = 2000;  // objective evaluations over all starts
    int starts = 5;
    std::size_t search_samples = 4000;
    std::size_t final_samples = 200000;
    unsigned threads = 1;
    /// Tried before the built-in starts (e.g. the optimum at a neighbouring power).
    std::vector<RippleDistribution> extra_starts;
};

struct OptimizeResult {
    RippleDistribution dist;
    MIResult mi;  // fresh estimate with final_samples
    int evaluations = 0;
    bool budget_exhausted = false;  // best start stopped before simplex convergence
    std::string best_start;
};

/// Multi-start simplex search for the q-level ripple maximizing mi_estimate.
/// The built-in starts are the two-ring construction behind I1 (when S lies
/// in its root domain), nested rings, and seeded random points.
OptimizeResult optimize_ripple(std::size_t q, double S, const NoiseLaw& law, std::uint64_t seed,
                               const OptimizeOptions& opt = {});

/// Convenience overload taking the link noise N and the tensor.
OptimizeResult optimize_ripple(std::size_t q, double S, double N, const SystemConfig& cfg,
                               const CouplingTensor& t, int budget, std::uint64_t seed,
                               Surrogate kind = Surrogate::level_spread);

}  // namespace fibercap
