#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "fibercap/config.hpp"

namespace fibercap {

using cd = std::complex<double>;

/// Signal and noise power profiles along the normalized distance xi = z / L_d.
class PowerProfiles {
public:
    explicit PowerProfiles(const SystemConfig& cfg);

    /// Psi_s = exp(-alpha L_d mod(xi, L_s / L_d)).
    double signal(double xi) const;
    /// Number of amplifiers passed at xi (0 in the first span).
    int amplifier_count(double xi) const;
    /// Psi_n = (count / n_spans)^2 Psi_s. Normalized so that the noise
    /// accumulated at the receiver has unit weight.
    double noise(double xi) const;
    /// sqrt(Psi_n Psi_s), the weight defining K.
    double signal_noise(double xi) const;

    double xi_span() const { return xi_span_; }
    double xi_link() const { return xi_span_ * n_spans_; }
    int n_spans() const { return n_spans_; }
    double loss_per_xi() const { return loss_per_xi_; }

private:
    double xi_span_;
    double loss_per_xi_;  // alpha * L_d
    int n_spans_;
};

/// Closed-form C~_mn(xi) for the Gaussian pulse:
/// i tau / sqrt(2 pi (1 + xi^2)) exp(-(m^2 + n^2) tau^2 / (2 (1 + xi^2)) + i s xi m n tau^2 / (1 + xi^2)),
/// tau = T / T0, s = sign(beta2).
cd ctilde_closed(const SystemConfig& cfg, int m, int n, double xi);

struct QuadratureReport {
    cd value;
    double refinement_delta = 0.0;  // |coarse - fine| / max(|fine|, scale)
};

/// C~_mn(xi) = i T \int dt f*_xi(t) f_xi(t - mT) f_xi(t - nT) f*_xi(t - (m+n)T),
/// by composite Gauss-Legendre over the overlap window of the dispersed pulses.
/// Throws NumericalError when grid refinement changes the result by more than rel_tol.
QuadratureReport ctilde_time_report(const SystemConfig& cfg, int m, int n, double xi,
                                    double rel_tol = 1e-9);
cd ctilde_time(const SystemConfig& cfg, int m, int n, double xi);

struct FrequencyQuadratureOptions {
    double cutoff_t0 = 9.0;  // each axis truncated at +-cutoff / T0
    int max_shift = 4;       // largest |m| + |n| the lattice must resolve
    double max_xi = 4.0;     // largest xi the lattice must resolve
    double rel_tol = 1e-7;
};

/// Triple-integral evaluator in the frequency domain:
/// C~_mn(xi) = i T (2 pi)^-3 \iiint dw dw1 dw2 exp(-i w1 w2 beta2 L_d xi - i w1 m T - i w2 n T)
///              f*(w) f(w1 + w) f(w2 + w) f*(w1 + w2 + w).
/// All three axes share one uniform lattice, so the shifted spectra are table
/// lookups and the inner w sum is cached. The lattice spacing is chosen so the
/// implied time-domain period clears every requested shift; each value is
/// certified against a second, finer lattice.
class FrequencyDomainCoupling {
public:
    explicit FrequencyDomainCoupling(const SystemConfig& cfg, FrequencyQuadratureOptions opt = {});

    QuadratureReport evaluate(int m, int n, double xi) const;
    cd operator()(int m, int n, double xi) const { return evaluate(m, n, xi).value; }

private:
    struct Lattice {
        double step = 0.0;
        std::vector<double> omega;
        Eigen::MatrixXd inner;  // step^3 * sum_k f(w_k) f(w_k + w_i) f(w_k + w_j) f(w_k + w_i + w_j)
    };
    Lattice build(double step) const;
    cd sum(const Lattice& g, int m, int n, double xi) const;

    SystemConfig cfg_;
    FrequencyQuadratureOptions opt_;
    Lattice coarse_, fine_;
};

cd ctilde_freq(const SystemConfig& cfg, int m, int n, double xi);

enum class CTildeEvaluator { closed_form, time_quadrature };

struct TensorOptions {
    unsigned threads = 1;
    int gl_order = 8;
    /// Upper bound on (2M+1)^2 * (number of xi nodes) before refusing.
    double max_work = 5e10;
    CTildeEvaluator evaluator = CTildeEvaluator::closed_form;
};

/// Memory-window coefficients C_mn = \int dxi Psi_s C~_mn and
/// K_mn = \int dxi sqrt(Psi_n Psi_s) C~_mn over the whole link, (m, n) in [-M, M]^2.
struct CouplingTensor {
    int M = 0;
    int n_xi = 0;
    Eigen::MatrixXcd C;
    Eigen::MatrixXcd K;
    std::vector<double> xi_nodes;
    std::string fingerprint;

    int width() const { return 2 * M + 1; }
    cd c(int m, int n) const { return C(m + M, n + M); }
    cd k(int m, int n) const { return K(m + M, n + M); }

    /// sum over m, n != 0 of |C_mn|^2 (resp. |K_mn|^2).
    double ss_sum() const;
    double sn_sum() const;
    /// The same tensor restricted to a smaller window.
    CouplingTensor truncated(int new_M) const;
};

/// Per-span panel breakpoints on [0, xi_span]: half equally spaced, half
/// equally spaced in the cumulative loss weight (clustered at the span start).
std::vector<double> span_breakpoints(const PowerProfiles& prof, int n_xi);

/// Nodes and profile-weighted quadrature weights covering the whole link.
struct LinkRule {
    std::vector<double> nodes;
    std::vector<double> signal_weights;        // w * Psi_s
    std::vector<double> signal_noise_weights;  // w * sqrt(Psi_n Psi_s)
};
LinkRule link_rule(const SystemConfig& cfg, int n_xi, int gl_order = 8);

CouplingTensor integrate_tensor(const SystemConfig& cfg, int M, int n_xi, TensorOptions opt = {});

struct DecayFit {
    double slope = 0.0;      // d log|C_m0| / dm (negative for decay)
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least-squares fit of log|C[m, 0]| against m for m in [m_lo, m_hi].
DecayFit fit_decay(const CouplingTensor& t, int m_lo, int m_hi);

/// Fraction of sum |C_mn|^2 falling outside the window |m|, |n| <= window,
/// with the mass beyond the computed tensor extrapolated geometrically from
/// the outermost shell using the fitted decay.
double tail_mass_fraction(const CouplingTensor& t, int window, const DecayFit& fit);

struct MemorySelection {
    int M = 0;
    DecayFit fit;
    double tail_mass = 0.0;
    int computed_M = 0;
};

struct MemoryOptions {
    int M_max = 20;
    int n_xi = 32;
    double min_r_squared = 0.8;
    TensorOptions tensor;
};

/// Smallest M whose tail mass is below tail_tol. Throws NumericalError if the
/// exponential decay fit has R^2 below min_r_squared.
MemorySelection select_memory(const SystemConfig& cfg, double tail_tol, MemoryOptions opt = {});
MemorySelection select_memory(const CouplingTensor& full, double tail_tol,
                              double min_r_squared = 0.8);

/// Structured-text cache of a tensor with a config fingerprint header.
void write_tensor(std::ostream& os, const CouplingTensor& t);
CouplingTensor read_tensor(std::istream& is);
/// m,n,abs_C,abs_K rows for heat maps.
void write_tensor_csv(std::ostream& os, const CouplingTensor& t);

}  // namespace fibercap
