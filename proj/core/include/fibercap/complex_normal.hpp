#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "fibercap/perturbative.hpp"

namespace fibercap {

/// Multivariate complex normal law with mean m, covariance Gamma = E[e e^H]
/// and relation Upsilon = E[e e^T], e = y - m. Stored with a Cholesky factor of
/// the augmented 2d x 2d covariance [[Gamma, Upsilon], [Upsilon^*, Gamma^*]].
class ComplexNormalLaw {
public:
    /// Throws DegenerateLawError when the augmented matrix is not positive
    /// definite after a diagonal jitter of at most 1e-10 * trace.
    ComplexNormalLaw(Eigen::VectorXcd mean, Eigen::MatrixXcd gamma, Eigen::MatrixXcd upsilon);

    Eigen::Index dim() const { return mean_.size(); }
    const Eigen::VectorXcd& mean() const { return mean_; }
    const Eigen::MatrixXcd& gamma() const { return gamma_; }
    const Eigen::MatrixXcd& upsilon() const { return upsilon_; }
    /// Gamma^* - Upsilon^H Gamma^{-1} Upsilon
    const Eigen::MatrixXcd& schur() const { return schur_; }
    double jitter() const { return jitter_; }

    /// log |Gamma| + log |P|
    double log_det() const { return log_det_; }
    /// d log(pi e) + (log|Gamma| + log|P|) / 2, in nats.
    double entropy() const;

    double log_pdf(const Eigen::VectorXcd& y) const;
    Eigen::VectorXcd sample(std::uint64_t seed) const;
    /// n draws as columns.
    Eigen::MatrixXcd sample(std::size_t n, std::uint64_t seed) const;

private:
    Eigen::VectorXcd mean_;
    Eigen::MatrixXcd gamma_, upsilon_, schur_;
    Eigen::LLT<Eigen::MatrixXcd> aug_;
    Eigen::MatrixXd real_factor_;  // lower Cholesky factor of cov([Re e; Im e])
    double log_det_ = 0.0;
    double jitter_ = 0.0;
};

/// Gamma = M M^H + L L^H, Upsilon = M L^T + L M^T.
ComplexNormalLaw law_from_mixing(const NoiseMixing& mix, const CVector& xt);

/// Draws y from the law.
inline Eigen::VectorXcd sample_law(const ComplexNormalLaw& law, std::uint64_t seed) {
    return law.sample(seed);
}

}  // namespace fibercap
