#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fibercap/coupling.hpp"
#include "fibercap/error.hpp"
#include "fibercap/rng.hpp"

using namespace fibercap;

namespace {
const SystemConfig& long_link() {
    static const SystemConfig c = make_config(reference_link(10));
    return c;
}
}  // namespace

TEST(PowerProfiles, SpanStructure) {
    const PowerProfiles p(long_link());
    const double xs = p.xi_span();
    EXPECT_DOUBLE_EQ(p.signal(0.0), 1.0);
    EXPECT_NEAR(p.signal(0.5 * xs), std::exp(-p.loss_per_xi() * 0.5 * xs), 1e-15);
    EXPECT_NEAR(p.signal(3.5 * xs), p.signal(0.5 * xs), 1e-12);
    EXPECT_EQ(p.amplifier_count(0.5 * xs), 0);
    EXPECT_EQ(p.amplifier_count(3.5 * xs), 3);
    EXPECT_DOUBLE_EQ(p.noise(0.5 * xs), 0.0);
    EXPECT_NEAR(p.signal_noise(3.5 * xs), std::sqrt(p.noise(3.5 * xs) * p.signal(3.5 * xs)), 1e-15);
}

TEST(CTilde, ClosedFormMatchesTimeQuadrature) {
    for (double xi : {0.0, 0.7, 3.0, 20.0})
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n) {
                const cd a = ctilde_closed(long_link(), m, n, xi);
                const cd b = ctilde_time(long_link(), m, n, xi);
                const double scale = std::abs(ctilde_closed(long_link(), 0, 0, xi));
                EXPECT_LT(std::abs(a - b), 1e-9 * scale) << m << "," << n << " xi=" << xi;
            }
}

TEST(CTilde, FrequencyLatticeMatchesClosedForm) {
    FrequencyDomainCoupling f(long_link());
    for (double xi : {1.0, 4.0}) {
        const double scale = std::abs(ctilde_closed(long_link(), 0, 0, xi));
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n)
                EXPECT_LT(std::abs(f(m, n, xi) - ctilde_closed(long_link(), m, n, xi)), 1e-8 * scale);
    }
}

TEST(CTilde, SymmetriesOfTheClosedForm) {
    for (double xi : {0.3, 5.0})
        for (int m = -3; m <= 3; ++m)
            for (int n = -3; n <= 3; ++n) {
                EXPECT_EQ(ctilde_closed(long_link(), m, n, xi), ctilde_closed(long_link(), n, m, xi));
                const cd c = ctilde_closed(long_link(), m, n, xi);
                EXPECT_NEAR(std::abs(ctilde_closed(long_link(), -m, n, xi) + std::conj(c)), 0.0,
                            1e-15 * std::abs(ctilde_closed(long_link(), 0, 0, xi)));
            }
}

TEST(Tensor, SymmetricPeakedAndEvaluatorIndependent) {
    const CouplingTensor t = integrate_tensor(long_link(), 4, 16);
    TensorOptions slow;
    slow.evaluator = CTildeEvaluator::time_quadrature;
    const CouplingTensor u = integrate_tensor(make_config(reference_link(1)), 2, 8, slow);
    const CouplingTensor v = integrate_tensor(make_config(reference_link(1)), 2, 8);
    for (int m = -4; m <= 4; ++m)
        for (int n = -4; n <= 4; ++n) {
            EXPECT_NEAR(std::abs(t.c(m, n) - t.c(n, m)), 0.0, 1e-12 * std::abs(t.c(0, 0)));
            EXPECT_LE(std::abs(t.c(m, n)), std::abs(t.c(0, 0)));
        }
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) EXPECT_NEAR(std::abs(u.c(m, n) - v.c(m, n)), 0.0, 1e-8 * std::abs(v.c(0, 0)));
    EXPECT_EQ(t.fingerprint, long_link().fingerprint());
}

TEST(Tensor, NoiseWeightVanishesOnASingleSpan) {
    const CouplingTensor t = integrate_tensor(make_config(reference_link(1)), 3, 8);
    EXPECT_EQ(t.sn_sum(), 0.0);
    EXPECT_GT(t.ss_sum(), 0.0);
    const CouplingTensor l = integrate_tensor(long_link(), 3, 8);
    EXPECT_GT(l.sn_sum(), 0.0);
}

TEST(Tensor, TruncationKeepsEntries) {
    const CouplingTensor t = integrate_tensor(long_link(), 6, 8);
    const CouplingTensor s = t.truncated(3);
    EXPECT_EQ(s.M, 3);
    for (int m = -3; m <= 3; ++m)
        for (int n = -3; n <= 3; ++n) EXPECT_EQ(s.c(m, n), t.c(m, n));
    EXPECT_LT(s.ss_sum(), t.ss_sum());
    EXPECT_THROW(t.truncated(7), ValidationError);
}

TEST(Tensor, TextRoundTrip) {
    const CouplingTensor t = integrate_tensor(long_link(), 3, 8);
    std::stringstream ss;
    write_tensor(ss, t);
    const CouplingTensor r = read_tensor(ss);
    EXPECT_EQ(r.M, t.M);
    EXPECT_EQ(r.fingerprint, t.fingerprint);
    EXPECT_EQ((r.C - t.C).norm(), 0.0);
    EXPECT_EQ((r.K - t.K).norm(), 0.0);
    std::stringstream bad("garbage\n");
    EXPECT_THROW(read_tensor(bad), ValidationError);
}

TEST(Memory, LongerLinkNeedsLongerWindow) {
    MemoryOptions o;
    o.M_max = 40;
    const MemorySelection a = select_memory(make_config(reference_link(1)), 1e-3, o);
    const MemorySelection b = select_memory(make_config(reference_link(3)), 1e-3, o);
    EXPECT_GT(a.fit.r_squared, 0.9);
    EXPECT_LT(a.fit.slope, 0.0);
    EXPECT_GE(b.M, a.M);
    EXPECT_LE(a.tail_mass, 1e-3);
    const MemorySelection loose = select_memory(make_config(reference_link(1)), 0.5, o);
    EXPECT_LE(loose.M, a.M);
}

TEST(Memory, RefusesWithoutExponentialDecay) {
    CouplingTensor t;
    t.M = 10;
    t.C = Eigen::MatrixXcd::Zero(21, 21);
    t.K = t.C;
    Engine eng = make_engine(9);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j) t.C(i, j) = u(eng);
    EXPECT_THROW(select_memory(t, 1e-3), NumericalError);
}
