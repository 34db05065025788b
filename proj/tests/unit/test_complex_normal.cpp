#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fibercap/complex_normal.hpp"
#include "fibercap/error.hpp"
#include "fibercap/rng.hpp"

using namespace fibercap;

namespace {
Eigen::MatrixXcd hpd(int d, std::uint64_t seed) {
    Engine e = make_engine(seed);
    Eigen::MatrixXcd A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = complex_normal(e);
    return A * A.adjoint() + 0.5 * Eigen::MatrixXcd::Identity(d, d);
}
}  // namespace

TEST(ComplexNormal, ScalarNonCircularMatchesRealBivariate) {
    // Gamma = g, Upsilon = u real: Re, Im independent with variances (g+u)/2, (g-u)/2
    const double g = 2.0, u = 0.6;
    Eigen::VectorXcd m(1);
    m(0) = {0.3, -0.2};
    const ComplexNormalLaw law(m, Eigen::MatrixXcd::Constant(1, 1, g), Eigen::MatrixXcd::Constant(1, 1, u));
    const double vr = 0.5 * (g + u), vi = 0.5 * (g - u);
    for (cd y : {cd{0, 0}, cd{1.5, 0.4}, cd{-2, 3}}) {
        const cd e = y - m(0);
        const double ref = -std::log(2 * std::numbers::pi * std::sqrt(vr * vi)) - 0.5 * e.real() * e.real() / vr -
                           0.5 * e.imag() * e.imag() / vi;
        Eigen::VectorXcd yy(1);
        yy(0) = y;
        EXPECT_NEAR(law.log_pdf(yy), ref, 1e-13);
    }
    EXPECT_NEAR(law.entropy(), std::log(2 * std::numbers::pi * std::numbers::e * std::sqrt(vr * vi)), 1e-13);
}

TEST(ComplexNormal, CircularEntropyAndSchur) {
    const Eigen::MatrixXcd G = hpd(3, 2);
    const ComplexNormalLaw law(Eigen::VectorXcd::Zero(3), G, Eigen::MatrixXcd::Zero(3, 3));
    const double logdet = std::log(G.determinant().real());
    EXPECT_NEAR(law.entropy(), 3 * std::log(std::numbers::pi * std::numbers::e) + logdet, 1e-12);
    EXPECT_NEAR((law.schur() - G.conjugate()).norm(), 0.0, 1e-12);
    EXPECT_EQ(law.jitter(), 0.0);
}

TEST(ComplexNormal, DegenerateLawsAreRefused) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(2, 2);
    // |Upsilon| = Gamma on a direction: the imaginary part vanishes
    EXPECT_THROW(ComplexNormalLaw(Eigen::VectorXcd::Zero(2), G, G), DegenerateLawError);
    EXPECT_THROW(ComplexNormalLaw(Eigen::VectorXcd::Zero(2), Eigen::MatrixXcd::Zero(2, 2),
                                  Eigen::MatrixXcd::Zero(2, 2)),
                 DegenerateLawError);
    EXPECT_THROW(ComplexNormalLaw(Eigen::VectorXcd::Zero(3), G, Eigen::MatrixXcd::Zero(2, 2)), DimensionError);
}

TEST(ComplexNormal, SamplesReproduceSecondMoments) {
    const Eigen::MatrixXcd G = hpd(2, 3);
    Eigen::MatrixXcd U(2, 2);
    U << cd(0.3, 0.1), cd(0.05, -0.1), cd(0.05, -0.1), cd(-0.2, 0.2);
    Eigen::VectorXcd m(2);
    m << cd(1, 2), cd(-1, 0);
    const ComplexNormalLaw law(m, G, U);
    const std::size_t n = 200000;
    const Eigen::MatrixXcd Y = law.sample(n, 7);
    Eigen::MatrixXcd Gh = Eigen::MatrixXcd::Zero(2, 2), Uh = Gh;
    Eigen::VectorXcd mh = Y.rowwise().mean();
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::VectorXcd e = Y.col(k) - m;
        Gh += e * e.adjoint();
        Uh += e * e.transpose();
    }
    Gh /= double(n);
    Uh /= double(n);
    const double tol = 6.0 * G.norm() / std::sqrt(double(n));
    EXPECT_LT((mh - m).norm(), tol);
    EXPECT_LT((Gh - G).norm(), tol);
    EXPECT_LT((Uh - U).norm(), tol);
    EXPECT_EQ(law.sample(3, 7), law.sample(3, 7));
}

TEST(ComplexNormal, LogPdfIntegratesToEntropy) {
    // E[-log p] equals the differential entropy
    const Eigen::MatrixXcd G = hpd(2, 4);
    Eigen::MatrixXcd U = 0.2 * G;
    const ComplexNormalLaw law(Eigen::VectorXcd::Zero(2), G, U);
    const Eigen::MatrixXcd Y = law.sample(100000, 9);
    double h = 0.0;
    for (Eigen::Index k = 0; k < Y.cols(); ++k) h -= law.log_pdf(Y.col(k));
    h /= double(Y.cols());
    EXPECT_NEAR(h, law.entropy(), 0.02);
}
