#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fibercap/error.hpp"
#include "fibercap/mutual_info.hpp"
#include "fibercap/quadrature.hpp"
#include "fibercap/ripple.hpp"
#include "fibercap/special.hpp"

using namespace fibercap;

TEST(Bessel, ScaledI0) {
    EXPECT_NEAR(bessel_i0_scaled(0.0), 1.0, 1e-16);
    EXPECT_NEAR(bessel_i0_scaled(1.0), 1.2660658777520082 * std::exp(-1.0), 1e-15);
    EXPECT_NEAR(bessel_i0_scaled(10.0), 2815.716628466254 * std::exp(-10.0), 1e-14);
    EXPECT_NEAR(bessel_i0_scaled(20.0), 4.355828255955353e7 * std::exp(-20.0), 1e-14);
    // both sides of the series / asymptotic switch
    EXPECT_NEAR(bessel_i0_scaled(29.5), 0.07376861727872859, 1e-15);
    EXPECT_NEAR(bessel_i0_scaled(30.0), 0.07314594648223729, 1e-15);
    EXPECT_NEAR(bessel_i0_scaled(30.5), 0.07253878407077908, 1e-15);
    EXPECT_NEAR(bessel_i0_scaled(50.0), 0.05656162664745419, 1e-15);
    EXPECT_NEAR(log_bessel_i0(800.0), 800.0 - 0.5 * std::log(2 * std::numbers::pi * 800.0) + 1.0 / 6400.0, 1e-6);
}

TEST(Ripple, DensitiesNormalize) {
    const RippleDistribution d{{0.5, 0.3, 0.2}, {1.0, 0.5, 0.2}, {0.0, 2.0, 4.0}};
    EXPECT_NEAR(d.total_power(), 0.5 + 0.3 * 4.5 + 0.2 * 16.2, 1e-14);
    const double r = quad::adaptive([&](double x) { return ripple_radial_pdf(d, x); }, 0.0, 12.0, 1e-12);
    EXPECT_NEAR(r, 1.0, 1e-9);
    const double p = quad::adaptive(
        [&](double x) { return 2 * std::numbers::pi * x * ripple_planar_pdf(d, {x, 0.0}); }, 0.0, 12.0, 1e-12);
    EXPECT_NEAR(p, 1.0, 1e-9);
}

TEST(Ripple, SamplesHaveTheRightPower) {
    const RippleDistribution d = RippleDistribution::two_ring(1.0, 0.2, 3.0);
    const auto x = ripple_sample(d, 200000, 4);
    double s = 0.0;
    for (auto v : x) s += std::norm(v);
    EXPECT_NEAR(s / x.size(), d.total_power(), 0.02 * d.total_power());
    EXPECT_EQ(ripple_sample(d, 10, 4), ripple_sample(d, 10, 4));
}

TEST(Ripple, ValidationRejectsBadLevels) {
    EXPECT_THROW((RippleDistribution{{0.5, 0.6}, {1, 1}, {0, 1}}).validate(), ValidationError);
    EXPECT_THROW((RippleDistribution{{0.5, 0.5}, {1, -1}, {0, 1}}).validate(), ValidationError);
    EXPECT_THROW((RippleDistribution{{0.5, 0.5}, {1, 1}, {0, -1}}).validate(), ValidationError);
    EXPECT_THROW((RippleDistribution{{1.0}, {1, 1}, {0}}).validate(), ValidationError);
    EXPECT_NO_THROW(RippleDistribution::gaussian(2.0).validate());
}

TEST(MutualInfo, GaussianOverAwgn) {
    const NoiseLaw law{0.1, 0.0, Surrogate::level_spread};
    const MIResult r = mi_estimate(RippleDistribution::gaussian(1.0), law, 100000, 1);
    EXPECT_NEAR(r.bits, std::log2(11.0), 5 * r.stderr_bits + 1e-9);
}

TEST(MutualInfo, MatchesQuadratureOfReceivedDensity) {
    const RippleDistribution d = RippleDistribution::two_ring(0.5, 0.3, 2.5);
    const NoiseLaw law{0.05, 0.2, Surrogate::level_spread};
    // h(Y) by radial quadrature of the exact mixture density
    const double hy = quad::adaptive(
        [&](double r) {
            const double lp = received_log_density(d, law, r);
            return -2 * std::numbers::pi * r * std::exp(lp) * lp;
        },
        0.0, 8.0, 1e-11);
    double hc = 0.0;
    for (std::size_t a = 0; a < d.levels(); ++a)
        hc += d.p[a] * std::log(std::numbers::pi * std::numbers::e * law.variance(d, a));
    const MIResult r = mi_estimate(d, law, 400000, 2);
    EXPECT_NEAR(r.bits, (hy - hc) * std::numbers::log2e, 4 * r.stderr_bits);
}

TEST(MutualInfo, ThreadInvariantAndSeeded) {
    const RippleDistribution d = RippleDistribution::two_ring(1.0, 0.4, 2.0);
    const NoiseLaw law{0.1, 0.0, Surrogate::level_spread};
    MIOptions one, four;
    four.threads = 4;
    const MIResult a = mi_estimate(d, law, 30000, 3, one), b = mi_estimate(d, law, 30000, 3, four);
    EXPECT_EQ(a.bits, b.bits);
    EXPECT_EQ(a.stderr_bits, b.stderr_bits);
    EXPECT_NE(mi_estimate(d, law, 30000, 4).bits, a.bits);
    MIOptions strict;
    strict.stderr_tol = 1e-9;
    EXPECT_TRUE(mi_estimate(d, law, 1000, 3, strict).flagged);
}

TEST(MutualInfo, SurrogateVariances) {
    const RippleDistribution d{{0.5, 0.5}, {1.0, 3.0}, {0.0, 1.0}};
    const NoiseLaw a{0.1, 2.0, Surrogate::level_spread}, b{0.1, 2.0, Surrogate::average_power};
    EXPECT_NEAR(a.variance(d, 1), 0.1 * (1 + 6 * 0.1 * 2.0 * 81.0), 1e-12);
    const double S = d.total_power();
    EXPECT_NEAR(b.variance(d, 0), 0.1 * (1 + 6 * 0.1 * 2.0 * S * S * S * S), 1e-9);
    EXPECT_EQ(b.variance(d, 0), b.variance(d, 1));
    EXPECT_EQ(parse_surrogate(to_string(Surrogate::average_power)), Surrogate::average_power);
    EXPECT_THROW(parse_surrogate("nope"), ValidationError);
}

TEST(MutualInfo, AveragePowerSurrogateCannotBeatGaussian) {
    // with input-independent noise the Gaussian input is optimal
    const NoiseLaw law{0.1, 0.5, Surrogate::average_power};
    const RippleDistribution d = RippleDistribution::two_ring(0.8, 0.3, 1.2);
    const double S = d.total_power();
    const double gauss = std::log2(1.0 + S / law.variance(d, 0));
    const MIResult r = mi_estimate(d, law, 200000, 5);
    EXPECT_LT(r.bits, gauss + 3 * r.stderr_bits);
}

TEST(MutualInfo, RejectsBadInput) {
    const NoiseLaw bad{0.0, 0.0, Surrogate::level_spread};
    EXPECT_THROW(mi_estimate(RippleDistribution::gaussian(1.0), bad, 100, 1), DomainError);
    const NoiseLaw ok{1.0, 0.0, Surrogate::level_spread};
    EXPECT_THROW(mi_estimate(RippleDistribution::gaussian(1.0), ok, 1, 1), ValidationError);
}
