#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fibercap/bounds.hpp"
#include "fibercap/curve.hpp"
#include "fibercap/error.hpp"
#include "fibercap/validation.hpp"

using namespace fibercap;

namespace {
constexpr double kN = 5.6e-6, kKappa = 383.7;
}

TEST(Bounds, S1SolvesItsDefinition) {
    const double S1 = s1_power(kKappa, kN);
    EXPECT_NEAR(S1, 1.0 / std::sqrt(c_nl(kKappa, S1, kN)), 1e-12 * S1);
    EXPECT_THROW(s1_power(0.0, kN), DomainError);
}

TEST(Bounds, I0HasOneMaximumAtS1Scaled) {
    const double S1 = s1_power(kKappa, kN);
    // S / (1 + C_nl S^2) peaks where C_nl S^2 = 1/3
    const double peak = S1 * std::pow(3.0, -0.25);
    EXPECT_GT(bound_I0(kKappa, peak, kN), bound_I0(kKappa, 0.98 * peak, kN));
    EXPECT_GT(bound_I0(kKappa, peak, kN), bound_I0(kKappa, 1.02 * peak, kN));
    EXPECT_NEAR(bound_I0(0.0, 1.0, kN), std::log2(1.0 + 1.0 / kN), 1e-12);
}

TEST(Bounds, I1JoinsI0AtS1) {
    const double S1 = s1_power(kKappa, kN);
    const I1Result r = bound_I1(kKappa, S1, kN);
    EXPECT_NEAR(r.bits, bound_I0(kKappa, S1, kN), 1e-12);
    EXPECT_EQ(r.bits, r.plateau);
    EXPECT_THROW(bound_I1(kKappa, 0.9 * S1, kN), DomainError);
}

TEST(Bounds, I1RootOnTheDecreasingBranch) {
    const double S1 = s1_power(kKappa, kN);
    double prev = bound_I1(kKappa, S1, kN).bits;
    for (double r : {1.01, 1.2, 1.6, 2.0, 2.4, 2.45}) {
        const I1Result x = bound_I1(kKappa, r * S1, kN);
        EXPECT_GE(x.u, 1.5);
        EXPECT_LT(x.residual, 1e-10);
        EXPECT_NEAR(i1_power_requirement(x.u), r - 1.0, 1e-10);
        EXPECT_NEAR(x.rho2, x.u * S1, 1e-12 * x.rho2);
        EXPECT_NEAR(x.correction, x.delta * std::numbers::log2e, 1e-15);
        EXPECT_GT(x.bits, prev);
        prev = x.bits;
    }
}

TEST(Bounds, I1RootDomainEnds) {
    const double S1 = s1_power(kKappa, kN);
    EXPECT_NEAR(i1_max_power_ratio(), 1.0 + 2 * std::sqrt(std::numbers::pi) * std::pow(1.5, 1.5) * std::exp(-1.5),
                1e-15);
    EXPECT_THROW(bound_I1(kKappa, 2.5 * S1, kN), NumericalError);
    const double frozen = bound_I1_envelope(kKappa, 100 * S1, kN).bits;
    EXPECT_NEAR(frozen, bound_I1_envelope(kKappa, 3 * S1, kN).bits, 0.0);
    EXPECT_NEAR(frozen, bound_I1(kKappa, i1_max_power_ratio() * S1 * (1 - 1e-12), kN).bits, 1e-5);
}

TEST(Bounds, RatesUseTheCoefficientSums) {
    const SystemConfig cfg = make_config(reference_link(2, 1e-16));
    const CouplingTensor t = integrate_tensor(cfg, 10, 16);
    const double N = cfg.noise_power(), g = cfg.nonlinear_scale();
    EXPECT_NEAR(ss_variance(cfg, t, 2e-3), 2 * g * g * 8e-9 * t.ss_sum(), 1e-18);
    EXPECT_NEAR(kappa(cfg, t), g * g * t.sn_sum(), 1e-12 * kappa(cfg, t));
    EXPECT_GT(rate_ss(cfg, t, 1e-3, N), rate_ss(cfg, t, 1.0, N));
    EXPECT_NEAR(rate_gn(cfg, t.ss_sum(), 1e-3, N), rate_ss(cfg, t, 1e-3, N), 1e-14);
    EXPECT_THROW(rate_ss(cfg, t, 0.0, N), DomainError);
}

TEST(Bounds, AveragedSumIsTheContinuumOfTheLattice) {
    // the lattice tracks the continuum once the pulses spread over many symbols
    const SystemConfig cfg = make_config(reference_link(10, 2e-16));
    const CouplingTensor t = integrate_tensor(cfg, 136, 32);
    const double avg = averaged_ss_sum(cfg);
    EXPECT_NEAR(avg, t.ss_sum(), 0.1 * t.ss_sum());
    // short link: few symbols of memory, the continuum overcounts but stays positive
    const SystemConfig one = make_config(reference_link(1, 2e-16));
    EXPECT_GT(averaged_ss_sum(one), integrate_tensor(one, 40, 32).ss_sum());
}

TEST(Curve, BoundListParsing) {
    EXPECT_EQ(parse_bound_list("i0,ss,i0"), (std::vector<std::string>{"i0", "ss"}));
    EXPECT_THROW(parse_bound_list("i9"), ValidationError);
    EXPECT_THROW(parse_bound_list(","), ValidationError);
}

TEST(Curve, RowsOrderingAndWarnings) {
    const SystemConfig cfg = make_config(reference_link(10, 2e-16));
    const CouplingTensor t = integrate_tensor(cfg, 12, 16);
    const double S1 = s1_power(kappa(cfg, t), cfg.noise_power());
    CurveOptions o;
    o.powers_dbm = {watt_to_dbm(0.5 * S1), watt_to_dbm(1.5 * S1), watt_to_dbm(4 * S1)};
    o.bounds = {"awgn", "i0", "i1", "i1_envelope", "gn"};
    EXPECT_THROW(capacity_curve(cfg, t, o), ValidationError);
    o.averaged_sum = averaged_ss_sum(cfg);
    const CapacityCurve c = capacity_curve(cfg, t, o);
    ASSERT_EQ(c.points.size(), 15u);
    // rows are grouped by power, bounds in canonical order: awgn gn i0 i1 i1_envelope
    EXPECT_EQ(c.points[1].bound, "gn");
    EXPECT_EQ(c.points[3].note, "below S1");
    EXPECT_TRUE(std::isnan(c.points[3].bits));
    EXPECT_EQ(c.points[13].note, "no root");
    for (std::size_t p = 0; p < 3; ++p) EXPECT_GE(c.points[5 * p].bits, c.points[5 * p + 2].bits);
    EXPECT_GE(c.points[9].bits, c.points[8].bits);
    EXPECT_GE(c.points[14].bits, c.points[12].bits);
    std::ostringstream os;
    write_curve_csv(os, c, "level_spread");
    EXPECT_NE(os.str().find("power_dBm,bound,bits_per_symbol,stderr,note\n"), std::string::npos);
    EXPECT_NE(os.str().find("# fingerprint " + cfg.fingerprint()), std::string::npos);
}

TEST(Validation, SlopeFit) {
    EXPECT_NEAR(fit_slope({0, 1, 2, 3}, {1, 3, 5, 7}), 2.0, 1e-14);
    EXPECT_THROW(fit_slope({1}, {1}), DimensionError);
    EXPECT_THROW(fit_slope({1, 1}, {1, 2}), DomainError);
}
