#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fibercap/rng.hpp"

namespace fibercap {

/// Mixture of uniform-phase Gaussian rings: level a has weight p[a],
/// spread (variance) S_levels[a] in W and ring center rho_levels[a] in sqrt(W).
/// A draw is rho_a e^{i theta} + CN(0, S_a) with theta uniform.
struct RippleDistribution {
    std::vector<double> p;
    std::vector<double> S_levels;
    std::vector<double> rho_levels;

    std::size_t levels() const { return p.size(); }
    /// Second moment sum_a p_a (S_a + rho_a^2).
    double total_power() const;
    /// Throws ValidationError when weights, variances or centers are invalid.
    void validate() const;

    static RippleDistribution gaussian(double S);
    /// Two-ring construction: weights {1-delta, delta}, both variances S1,
    /// centers {0, rho}.
    static RippleDistribution two_ring(double S1, double delta, double rho);
};

/// Joint density in polar coordinates (r, phi): sum_a r p_a / (pi S_a)
/// exp(-(r^2 + rho_a^2)/S_a) I0(2 r rho_a / S_a).
double ripple_pdf_polar(const RippleDistribution& d, double r);

/// Marginal density of |x| (integrates to one over r >= 0).
double ripple_radial_pdf(const RippleDistribution& d, double r);

/// Density of x on the complex plane (per unit area).
double ripple_planar_pdf(const RippleDistribution& d, std::complex<double> x);

std::complex<double> ripple_draw(const RippleDistribution& d, Engine& eng);
std::vector<std::complex<double>> ripple_sample(const RippleDistribution& d, std::size_t n,
                                                std::uint64_t seed);

}  // namespace fibercap
