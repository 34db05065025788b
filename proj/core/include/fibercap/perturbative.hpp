#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fibercap/config.hpp"
#include "fibercap/constellation.hpp"
#include "fibercap/coupling.hpp"
#include "fibercap/dataset.hpp"

namespace fibercap {

using CVector = std::vector<std::complex<double>>;

/// Orders above this are refused unless the caller raises `limit`.
inline constexpr int kDefaultOrderLimit = 3;

/// Y^(0..N_o_max) for the symbols x (any consistent scale):
///   Y^(N)_k = sum_{i+j+l=N-1} sum_{m,n} C_mn Y^(i)_{k+n} Y^(j)_{k+m} conj(Y^(l)_{k+m+n}),
/// with zero padding outside the block.
std::vector<CVector> deterministic_orders(const CouplingTensor& t, const CVector& x, int N_o_max,
                                          int limit = kDefaultOrderLimit);

/// sum_N eps^N Y^(N) for N <= upto.
CVector combine_orders(const std::vector<CVector>& orders, double eps, int upto);

/// Normalized distorted block X~ / sqrt(P) for a physical block of nominal power P.
CVector distort(const CouplingTensor& t, const SystemConfig& cfg, const SymbolBlock& block,
                int order);

enum class PhaseRule {
    /// 2 S (gamma L_d) sum_m |C_m0|^2
    squared_norm,
    /// 2 S (gamma L_d) sum_m Im C_m0: first-order mean rotation under Gaussian input
    gaussian_moment,
};

/// Common nonlinear phase to remove before measuring signal-signal noise.
double stationary_phase(const SystemConfig& cfg, const CouplingTensor& t, double S,
                        PhaseRule rule = PhaseRule::squared_norm);

struct NoiseMixing {
    Eigen::MatrixXcd M;
    Eigen::MatrixXcd L;
    double rho = 0.0;
    double eps = 0.0;
    int memory = 0;

    Eigen::Index dim() const { return M.rows(); }
};

/// M_km = rho d_km + rho eps sum_n K_{n,m-k} (x_{k+n} x*_{m+n} + x_{m+n} x*_{k+n})
/// L_km = rho eps sum_n K_{n,m-k-n} x_{k+n} x_{m-n}
/// xt is the normalized distorted block.
NoiseMixing noise_mixing(const CouplingTensor& t, const CVector& xt, double rho, double eps);
NoiseMixing noise_mixing(const CouplingTensor& t, const SystemConfig& cfg, const CVector& xt,
                         double P);

/// Y = X~ + M zeta + L zeta*, zeta i.i.d. unit circular normal.
CVector forward_sample(const CVector& xt, const NoiseMixing& mix, std::uint64_t seed);

struct ModelOptions {
    int order = 1;
    bool with_noise = false;
    unsigned threads = 1;
};

/// Model counterpart of run_ensemble: identical symbol streams for the same seed,
/// so datasets can be compared block by block.
Dataset model_ensemble(const SystemConfig& cfg, const CouplingTensor& t, const Constellation& c,
                       std::size_t n_blocks, std::size_t d, std::uint64_t seed,
                       const ModelOptions& opt = {});

}  // namespace fibercap
