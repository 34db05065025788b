#include <gtest/gtest.h>

#include <cmath>

#include "fibercap/complex_normal.hpp"
#include "fibercap/coupling.hpp"
#include "fibercap/error.hpp"
#include "fibercap/perturbative.hpp"
#include "fibercap/rng.hpp"

using namespace fibercap;

namespace {
const SystemConfig& cfg() {
    static const SystemConfig c = make_config(reference_link(3, 2e-17));
    return c;
}
const CouplingTensor& tensor() {
    static const CouplingTensor t = integrate_tensor(cfg(), 4, 8);
    return t;
}
CVector random_block(std::size_t d, std::uint64_t seed) {
    Engine e = make_engine(seed);
    CVector x(d);
    for (auto& v : x) v = complex_normal(e);
    return x;
}
cd at(const CVector& v, int i) { return i >= 0 && i < int(v.size()) ? v[i] : cd{}; }

// sum_{m,n} C_mn a_{k+n} b_{k+m} conj(c_{k+m+n}) written out directly
CVector triple(const CVector& a, const CVector& b, const CVector& c) {
    const int M = tensor().M, d = int(a.size());
    CVector out(d);
    for (int k = 0; k < d; ++k)
        for (int m = -M; m <= M; ++m)
            for (int n = -M; n <= M; ++n)
                out[k] += tensor().c(m, n) * at(a, k + n) * at(b, k + m) * std::conj(at(c, k + m + n));
    return out;
}
}  // namespace

TEST(Orders, FirstAndSecondMatchDirectSums) {
    const CVector x = random_block(20, 1);
    const auto y = deterministic_orders(tensor(), x, 2);
    ASSERT_EQ(y.size(), 3u);
    const CVector y1 = triple(x, x, x);
    CVector y2 = triple(y1, x, x);
    const CVector b = triple(x, y1, x), c = triple(x, x, y1);
    for (std::size_t k = 0; k < x.size(); ++k) y2[k] += b[k] + c[k];
    for (std::size_t k = 0; k < x.size(); ++k) {
        EXPECT_EQ(y[0][k], x[k]);
        EXPECT_NEAR(std::abs(y[1][k] - y1[k]), 0.0, 1e-12 * (1 + std::abs(y1[k])));
        EXPECT_NEAR(std::abs(y[2][k] - y2[k]), 0.0, 1e-11 * (1 + std::abs(y2[k])));
    }
}

TEST(Orders, CubicHomogeneity) {
    const CVector x = random_block(16, 2);
    CVector x2 = x;
    for (auto& v : x2) v *= 2.0;
    const auto a = deterministic_orders(tensor(), x, 1), b = deterministic_orders(tensor(), x2, 1);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(std::abs(b[1][k] - 8.0 * a[1][k]), 0.0, 1e-11);
}

TEST(Orders, LimitAndCombination) {
    const CVector x = random_block(8, 3);
    EXPECT_THROW(deterministic_orders(tensor(), x, 4), ValidationError);
    EXPECT_NO_THROW(deterministic_orders(tensor(), x, 4, 4));
    const auto y = deterministic_orders(tensor(), x, 2);
    const CVector z = combine_orders(y, 0.1, 2);
    for (std::size_t k = 0; k < x.size(); ++k)
        EXPECT_NEAR(std::abs(z[k] - (y[0][k] + 0.1 * y[1][k] + 0.01 * y[2][k])), 0.0, 1e-14);
    EXPECT_THROW(combine_orders(y, 0.1, 3), ValidationError);
}

TEST(Distort, ZeroPaddingMakesBlocksIndependent) {
    // a symbol further than M outside the block cannot influence it
    const CVector x = random_block(12, 4);
    CVector padded = x;
    padded.insert(padded.end(), 2 * tensor().M + 1, cd{});
    padded.push_back(cd{5.0, 0.0});
    const auto a = deterministic_orders(tensor(), x, 1), b = deterministic_orders(tensor(), padded, 1);
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_EQ(a[1][k], b[1][k]);
}

TEST(StationaryPhase, RulesScaleLinearlyWithPower) {
    const double a = stationary_phase(cfg(), tensor(), 1e-3, PhaseRule::squared_norm);
    const double b = stationary_phase(cfg(), tensor(), 2e-3, PhaseRule::squared_norm);
    EXPECT_NEAR(b, 2.0 * a, 1e-15);
    double s = 0.0, im = 0.0;
    for (int m = -tensor().M; m <= tensor().M; ++m) {
        s += std::norm(tensor().c(m, 0));
        im += tensor().c(m, 0).imag();
    }
    EXPECT_NEAR(a, 2e-3 * cfg().nonlinear_scale() * s, 1e-12 * std::abs(a));
    EXPECT_NEAR(stationary_phase(cfg(), tensor(), 1e-3, PhaseRule::gaussian_moment),
                2e-3 * cfg().nonlinear_scale() * im, 1e-12 * std::abs(a));
}

TEST(Mixing, LinearLimitIsScaledIdentity) {
    const CVector x = random_block(10, 5);
    const NoiseMixing mix = noise_mixing(tensor(), x, 0.3, 0.0);
    EXPECT_NEAR((mix.M - 0.3 * Eigen::MatrixXcd::Identity(10, 10)).norm(), 0.0, 1e-15);
    EXPECT_NEAR(mix.L.norm(), 0.0, 1e-15);

    // empirical covariance of Y - X~ at rho I, 0
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(10, 10);
    const int n = 20000;
    for (int s = 0; s < n; ++s) {
        const CVector y = forward_sample(x, mix, s);
        Eigen::VectorXcd e(10);
        for (int i = 0; i < 10; ++i) e(i) = y[i] - x[i];
        G += e * e.adjoint();
    }
    G /= n;
    const double rho2 = 0.09;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double ref = i == j ? rho2 : 0.0;
            EXPECT_NEAR(std::abs(G(i, j) - ref), 0.0, 5.0 * rho2 / std::sqrt(double(n)));
        }
}

TEST(Mixing, SignalTermsRaiseTheNoiseVariance) {
    const CVector x = random_block(10, 6);
    const double P = 10.0;
    const double rho = cfg().rho(P), eps = cfg().epsilon(P);
    const auto quiet = law_from_mixing(noise_mixing(tensor(), x, rho, 0.0), x);
    const auto loud = law_from_mixing(noise_mixing(tensor(), x, rho, eps), x);
    EXPECT_GT(loud.gamma().trace().real(), quiet.gamma().trace().real());
    EXPECT_GT(loud.upsilon().norm(), 0.0);
    const NoiseMixing mix = noise_mixing(tensor(), x, rho, eps);
    const int M = tensor().M;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            if (std::abs(i - j) > M) EXPECT_EQ(mix.M(i, j), cd{});
            if (std::abs(i - j) > 2 * M) EXPECT_EQ(mix.L(i, j), cd{});
        }
}

TEST(ModelEnsemble, DeterministicAndNoisy) {
    const Constellation c = Constellation::gaussian_iid(1e-3);
    ModelOptions o;
    o.with_noise = true;
    const Dataset a = model_ensemble(cfg(), tensor(), c, 2, 32, 9, o);
    const Dataset b = model_ensemble(cfg(), tensor(), c, 2, 32, 9, o);
    EXPECT_EQ(a.y, b.y);
    EXPECT_EQ(a.source, "model-order1-noisy");
    double v = 0.0;
    for (std::size_t i = 0; i < a.y.size(); ++i) v += std::norm(a.y[i] - a.x[i]);
    EXPECT_GT(v, 0.0);
}
