#include <gtest/gtest.h>

#include <cmath>

#include "fibercap/bounds.hpp"
#include "fibercap/error.hpp"
#include "fibercap/optimize.hpp"
#include "fibercap/rng.hpp"

using namespace fibercap;

TEST(NelderMead, Rosenbrock) {
    NelderMeadOptions o;
    o.max_evals = 5000;
    o.f_tol = 1e-14;
    const auto r = nelder_mead(
        [](const std::vector<double>& x) { return std::pow(1 - x[0], 2) + 100 * std::pow(x[1] - x[0] * x[0], 2); },
        {-1.2, 1.0}, o);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-3);
    EXPECT_NEAR(r.x[1], 1.0, 2e-3);
    EXPECT_LE(r.evals, o.max_evals + 3);
}

TEST(NelderMead, NonFiniteValuesAreWalls) {
    const auto r = nelder_mead(
        [](const std::vector<double>& x) { return x[0] < 0 ? NAN : (x[0] - 2) * (x[0] - 2); }, {0.5}, {});
    EXPECT_NEAR(r.x[0], 2.0, 1e-4);
}

TEST(Decode, AlwaysMeetsThePowerConstraint) {
    Engine e = make_engine(5);
    std::normal_distribution<double> n(0.0, 20.0);
    for (int k = 0; k < 500; ++k) {
        std::vector<double> th(9);
        for (auto& v : th) v = n(e);
        const RippleDistribution d = decode_ripple(th, 3, 0.7);
        EXPECT_NO_THROW(d.validate());
        EXPECT_NEAR(d.total_power(), 0.7, 1e-9);
    }
    EXPECT_THROW(decode_ripple({1, 2}, 3, 1.0), DimensionError);
}

TEST(Decode, EncodeRoundTrip) {
    const RippleDistribution d{{0.2, 0.5, 0.3}, {0.1, 0.2, 0.05}, {0.0, 0.8, 1.4}};
    const double S = d.total_power();
    const RippleDistribution r = decode_ripple(encode_ripple(d, S), 3, S);
    for (std::size_t a = 0; a < 3; ++a) {
        EXPECT_NEAR(r.p[a], d.p[a], 1e-12);
        EXPECT_NEAR(r.S_levels[a], d.S_levels[a], 1e-12);
        EXPECT_NEAR(r.rho_levels[a], d.rho_levels[a], 1e-12);
    }
    const RippleDistribution p = pad_levels(RippleDistribution::gaussian(1.0), 3);
    EXPECT_EQ(p.levels(), 3u);
    EXPECT_NEAR(p.p[0], 1.0, 3e-6);
}

TEST(Optimize, LinearChannelFindsNearGaussian) {
    const double N = 0.01, S = 1.0;
    const NoiseLaw law{N, 0.0, Surrogate::level_spread};
    OptimizeOptions o;
    o.budget = 300;
    o.search_samples = 2000;
    o.final_samples = 50000;
    const OptimizeResult r = optimize_ripple(2, S, law, 3, o);
    EXPECT_NEAR(r.dist.total_power(), S, 1e-9);
    EXPECT_LE(r.mi.bits, std::log2(1 + S / N) + 4 * r.mi.stderr_bits);
    EXPECT_GT(r.mi.bits, std::log2(1 + S / N) - 0.1);
    EXPECT_LE(r.evaluations, o.budget + 10);
}

TEST(Optimize, BeatsGaussianAboveS1AndIsSeeded) {
    const double N = 5.6e-6, k = 383.7, S1 = s1_power(k, N);
    const NoiseLaw law{N, k, Surrogate::level_spread};
    OptimizeOptions o;
    o.budget = 200;
    o.search_samples = 2000;
    o.final_samples = 20000;
    const OptimizeResult a = optimize_ripple(2, 2 * S1, law, 9, o);
    const OptimizeResult b = optimize_ripple(2, 2 * S1, law, 9, o);
    EXPECT_EQ(a.mi.bits, b.mi.bits);
    EXPECT_GT(a.mi.bits, bound_I0(k, 2 * S1, N));
    EXPECT_THROW(optimize_ripple(1, 1.0, law, 1, o), ValidationError);
}
