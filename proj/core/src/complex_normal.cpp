#include "fibercap/complex_normal.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fibercap/error.hpp"
#include "fibercap/rng.hpp"

namespace fibercap {

namespace {

constexpr double kJitterCap = 1e-10;

// Cholesky with a diagonal jitter ladder capped at kJitterCap * trace.
template <class Matrix>
Eigen::LLT<Matrix> factor(const Matrix& a, const char* what, double* used = nullptr) {
    const double tr = std::abs(a.trace());
    Eigen::LLT<Matrix> llt(a);
    double j = 0.0;
    for (double rel : {0.0, 1e-16, 1e-14, 1e-12, kJitterCap}) {
        j = rel * tr;
        if (rel > 0.0) {
            Matrix b = a;
            b.diagonal().array() += j;
            llt.compute(b);
        }
        if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success || !(tr > 0.0))
        throw DegenerateLawError(std::string(what) + " is not positive definite within the jitter cap");
    if (used) *used = j;
    return llt;
}

template <class LLT>
double llt_log_det(const LLT& llt) {
    double s = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(std::abs(l(i, i)));
    return 2.0 * s;
}

}  // namespace

ComplexNormalLaw::ComplexNormalLaw(Eigen::VectorXcd mean, Eigen::MatrixXcd gamma,
                                   Eigen::MatrixXcd upsilon)
    : mean_(std::move(mean)), gamma_(std::move(gamma)), upsilon_(std::move(upsilon)) {
    const Eigen::Index d = mean_.size();
    if (gamma_.rows() != d || gamma_.cols() != d || upsilon_.rows() != d || upsilon_.cols() != d)
        throw DimensionError("ComplexNormalLaw: mean, covariance and relation sizes differ");
    if (d == 0) throw DimensionError("ComplexNormalLaw: empty law");

    Eigen::MatrixXcd aug(2 * d, 2 * d);
    aug << gamma_, upsilon_, upsilon_.conjugate(), gamma_.conjugate();
    aug_ = factor(aug, "augmented covariance", &jitter_);

    double gj = 0.0;
    const auto gl = factor(gamma_, "covariance", &gj);
    schur_ = gamma_.conjugate() - upsilon_.adjoint() * gl.solve(upsilon_);
    const auto pl = factor(schur_, "Schur complement");
    log_det_ = llt_log_det(gl) + llt_log_det(pl);

    // e = a + i b:  E[aa^T] = Re(G+U)/2, E[bb^T] = Re(G-U)/2, E[ab^T] = Im(U-G)/2
    Eigen::MatrixXd rc(2 * d, 2 * d);
    rc.topLeftCorner(d, d) = 0.5 * (gamma_ + upsilon_).real();
    rc.bottomRightCorner(d, d) = 0.5 * (gamma_ - upsilon_).real();
    rc.topRightCorner(d, d) = 0.5 * (upsilon_ - gamma_).imag();
    rc.bottomLeftCorner(d, d) = 0.5 * (gamma_ + upsilon_).imag();
    real_factor_ = factor(rc, "real covariance").matrixL();
}

double ComplexNormalLaw::entropy() const {
    return static_cast<double>(dim()) * std::log(std::numbers::pi * std::numbers::e) + 0.5 * log_det_;
}

double ComplexNormalLaw::log_pdf(const Eigen::VectorXcd& y) const {
    const Eigen::Index d = dim();
    if (y.size() != d) throw DimensionError("log_pdf: observation length does not match the law");
    Eigen::VectorXcd z(2 * d);
    z << y - mean_, (y - mean_).conjugate();
    const double q = z.dot(aug_.solve(z)).real();  // z^H R^{-1} z
    return -static_cast<double>(d) * std::log(std::numbers::pi) - 0.5 * log_det_ - 0.5 * q;
}

Eigen::VectorXcd ComplexNormalLaw::sample(std::uint64_t seed) const {
    return sample(1, seed).col(0);
}

Eigen::MatrixXcd ComplexNormalLaw::sample(std::size_t n, std::uint64_t seed) const {
    const Eigen::Index d = dim();
    Engine eng = make_engine(seed, 0xC0C0);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd w(2 * d, static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < w.cols(); ++c)
        for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = g(eng);
    const Eigen::MatrixXd v = real_factor_.triangularView<Eigen::Lower>() * w;
    Eigen::MatrixXcd out(d, w.cols());
    for (Eigen::Index c = 0; c < w.cols(); ++c)
        for (Eigen::Index r = 0; r < d; ++r) out(r, c) = mean_(r) + std::complex<double>(v(r, c), v(r + d, c));
    return out;
}

ComplexNormalLaw law_from_mixing(const NoiseMixing& mix, const CVector& xt) {
    const auto d = static_cast<Eigen::Index>(xt.size());
    if (mix.M.rows() != d || mix.L.rows() != d)
        throw DimensionError("law_from_mixing: mixing matrices do not match the block");
    Eigen::VectorXcd mean(d);
    for (Eigen::Index i = 0; i < d; ++i) mean(i) = xt[i];
    Eigen::MatrixXcd gamma = mix.M * mix.M.adjoint() + mix.L * mix.L.adjoint();
    Eigen::MatrixXcd ups = mix.M * mix.L.transpose() + mix.L * mix.M.transpose();
    return ComplexNormalLaw(std::move(mean), std::move(gamma), std::move(ups));
}

}  // namespace fibercap
