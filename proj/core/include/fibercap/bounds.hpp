#pragma once

#include <string>
#include <vector>

#include "fibercap/config.hpp"
#include "fibercap/coupling.hpp"

namespace fibercap {

/// N_SS = 2 (gamma L_d)^2 S^3 sum_{m,n != 0} |C_mn|^2, in W.
double ss_variance(const SystemConfig& cfg, const CouplingTensor& t, double S);

/// log2(1 + S / (N + N_SS)).
double rate_ss(const SystemConfig& cfg, const CouplingTensor& t, double S, double N);

/// Infinite-memory (averaged) counterpart of CouplingTensor::ss_sum: the lattice
/// sum over m, n is replaced by the integral over continuous (m, n), which has a
/// closed form per pair of xi nodes. The excluded m = 0 / n = 0 lines become
/// the strips |m| < 1/2, |n| < 1/2 (their unit cells).
double averaged_ss_sum(const SystemConfig& cfg, int n_xi = 32);

/// GN-style rate using the averaged coefficient sum.
double rate_gn(const SystemConfig& cfg, double averaged_sum, double S, double N);

/// kappa = (gamma L_d)^2 sum_{m,n != 0} |K_mn|^2, in 1/W^2.
double kappa(const SystemConfig& cfg, const CouplingTensor& t);

/// C_nl(S) = 6 S^2 N kappa.
double c_nl(double kappa, double S, double N);

/// S1 solving S1 = C_nl(S1)^{-1/2}: (6 N kappa)^{-1/4}.
double s1_power(double kappa, double N);

/// log2(1 + S / (N (1 + C_nl(S) S^2))).
double bound_I0(double kappa, double S, double N);

struct I1Result {
    double bits = 0.0;
    double plateau = 0.0;     // log2(1 + S1 / (2N))
    double correction = 0.0;  // bits above the plateau
    double u = 0.0;           // rho^2 / S1
    double rho2 = 0.0;        // W
    double delta = 0.0;       // weight of the outer ring
    double residual = 0.0;    // |g(u) - (S - S1)/S1| after bisection
};

/// g(u) = 2 sqrt(pi) u^{3/2} e^{-u}: the power requirement with C_nl frozen at
/// S1, divided by S1. Its maximum is at u = 3/2.
double i1_power_requirement(double u);
double i1_max_power_ratio();  // 1 + g(3/2), the largest S / S1 with a root

/// Two-ring analytic bound. Throws DomainError for S < S1 and NumericalError
/// when the power requirement has no root on the decreasing branch.
I1Result bound_I1(double kappa, double S, double N);

/// bound_I1 evaluated at min(S, S_max): the same construction remains feasible
/// under an average-power (<=) constraint beyond the root domain.
I1Result bound_I1_envelope(double kappa, double S, double N);

struct CurvePoint {
    double power_dbm = 0.0;
    std::string bound;
    double bits = 0.0;
    double stderr_bits = 0.0;  // 0 for analytic points
    std::string note;
};

struct CapacityCurve {
    std::vector<CurvePoint> points;
    std::string fingerprint;
    std::uint64_t seed = 0;
};

}  // namespace fibercap
