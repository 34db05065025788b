#include "fibercap/bounds.hpp"

#include <cmath>
#include <numbers>

#include "fibercap/error.hpp"
#include "fibercap/quadrature.hpp"

namespace fibercap {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

double ss_variance(const SystemConfig& cfg, const CouplingTensor& t, double S) {
    if (!(S >= 0.0)) throw DomainError("ss_variance: S must be non-negative");
    const double g = cfg.nonlinear_scale();
    return 2.0 * g * g * S * S * S * t.ss_sum();
}

double rate_ss(const SystemConfig& cfg, const CouplingTensor& t, double S, double N) {
    require_positive(S, "rate_ss: S");
    require_positive(N, "rate_ss: N");
    return std::log2(1.0 + S / (N + ss_variance(cfg, t, S)));
}

double averaged_ss_sum(const SystemConfig& cfg, int n_xi) {
    const LinkRule rule = link_rule(cfg, n_xi);
    const auto& x = rule.nodes;
    const auto& w = rule.signal_weights;
    const std::size_t Q = x.size();
    const double tau = cfg.symbol_period / cfg.pulse.t0;
    const double t2 = tau * tau;
    const double s = cfg.beta2 < 0.0 ? -1.0 : 1.0;

    // C~_mn(xi) = i A(xi) exp(-a(xi)(m^2+n^2) + i b(xi) m n) with
    // A = tau/sqrt(2 pi (1+xi^2)), a = tau^2/(2(1+xi^2)), b = s xi tau^2/(1+xi^2).
    // \int dm dn C~(xi) C~*(xi') = 2 pi A A' / sqrt(4 a_+^2 + b_-^2),
    // a_+ = a + a', b_- = b - b'.
    std::vector<double> A(Q), a(Q), b(Q);
    for (std::size_t q = 0; q < Q; ++q) {
        const double r = 1.0 + x[q] * x[q];
        A[q] = tau / std::sqrt(2.0 * std::numbers::pi * r);
        a[q] = t2 / (2.0 * r);
        b[q] = s * x[q] * t2 / r;
    }
    // Each lattice point stands for its unit cell, so the excluded lines m = 0 and
    // n = 0 become the strips |m| < 1/2 and |n| < 1/2. Per node pair:
    //   plane  2 pi / sqrt(4 a+^2 + b-^2)
    //   strip  sqrt(pi / a+) sqrt(pi / c) erf(sqrt(c) / 2),  c = a+ + b-^2 / (4 a+)
    //   square by Gauss-Legendre (the strips overlap there)
    const quad::Rule sq = quad::gauss_legendre(24);
    const double pi = std::numbers::pi;
    double total = 0.0;
    for (std::size_t i = 0; i < Q; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < Q; ++j) {
            const double ap = a[i] + a[j], bm = b[i] - b[j];
            const double plane = 2.0 * pi / std::sqrt(4.0 * ap * ap + bm * bm);
            const double c = ap + bm * bm / (4.0 * ap);
            const double strip = std::sqrt(pi / ap) * std::sqrt(pi / c) * std::erf(0.5 * std::sqrt(c));
            double square = 0.0;
            for (std::size_t u = 0; u < sq.nodes.size(); ++u)
                for (std::size_t v = 0; v < sq.nodes.size(); ++v) {
                    const double m = 0.5 * sq.nodes[u], n = 0.5 * sq.nodes[v];
                    square += 0.25 * sq.weights[u] * sq.weights[v] * std::exp(-ap * (m * m + n * n)) *
                              std::cos(bm * m * n);
                }
            row += w[j] * A[j] * (plane - 2.0 * strip + square);
        }
        total += w[i] * A[i] * row;
    }
    return total;
}

double rate_gn(const SystemConfig& cfg, double averaged_sum, double S, double N) {
    require_positive(S, "rate_gn: S");
    require_positive(N, "rate_gn: N");
    const double g = cfg.nonlinear_scale();
    return std::log2(1.0 + S / (N + 2.0 * g * g * S * S * S * averaged_sum));
}

double kappa(const SystemConfig& cfg, const CouplingTensor& t) {
    const double g = cfg.nonlinear_scale();
    return g * g * t.sn_sum();
}

double c_nl(double kappa, double S, double N) { return 6.0 * S * S * N * kappa; }

double s1_power(double kappa, double N) {
    require_positive(kappa, "s1_power: kappa");
    require_positive(N, "s1_power: N");
    return std::pow(6.0 * N * kappa, -0.25);
}

double bound_I0(double kappa, double S, double N) {
    require_positive(S, "bound_I0: S");
    require_positive(N, "bound_I0: N");
    return std::log2(1.0 + S / (N * (1.0 + c_nl(kappa, S, N) * S * S)));
}

double i1_power_requirement(double u) {
    return 2.0 * std::sqrt(std::numbers::pi) * u * std::sqrt(u) * std::exp(-u);
}

double i1_max_power_ratio() { return 1.0 + i1_power_requirement(1.5); }

I1Result bound_I1(double kappa, double S, double N) {
    const double S1 = s1_power(kappa, N);
    require_positive(S, "bound_I1: S");
    if (S < S1) throw DomainError("bound_I1: S below S1; use bound_I0");

    I1Result r;
    r.plateau = std::log2(1.0 + S1 / (2.0 * N));
    const double target = (S - S1) / S1;
    if (target == 0.0) {
        r.bits = r.plateau;
        r.u = std::numeric_limits<double>::infinity();
        r.rho2 = r.u;
        return r;
    }

    // decreasing branch of g on [3/2, 1500]
    double lo = 1.5, hi = 1500.0;
    const double g_lo = i1_power_requirement(lo);
    if (target > g_lo)
        throw NumericalError("bound_I1: power requirement has no root for S/S1 = " +
                             std::to_string(S / S1) + " (max " + std::to_string(1.0 + g_lo) + ")");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (i1_power_requirement(mid) > target) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    // pick the bracket end with the smaller residual
    const double rl = std::abs(i1_power_requirement(lo) - target);
    const double rh = std::abs(i1_power_requirement(hi) - target);
    r.u = rl <= rh ? lo : hi;
    r.residual = std::min(rl, rh);
    r.rho2 = r.u * S1;
    r.delta = 2.0 * std::sqrt(std::numbers::pi * r.u) * std::exp(-r.u);
    r.correction = r.delta * std::numbers::log2e;
    r.bits = r.plateau + r.correction;
    return r;
}

I1Result bound_I1_envelope(double kappa, double S, double N) {
    const double S1 = s1_power(kappa, N);
    const double smax = S1 * i1_max_power_ratio();
    if (S >= smax) {
        I1Result r;
        r.plateau = std::log2(1.0 + S1 / (2.0 * N));
        r.u = 1.5;
        r.rho2 = 1.5 * S1;
        r.delta = 2.0 * std::sqrt(1.5 * std::numbers::pi) * std::exp(-1.5);
        r.correction = r.delta * std::numbers::log2e;
        r.bits = r.plateau + r.correction;
        return r;
    }
    return bound_I1(kappa, S, N);
}

}  // namespace fibercap
