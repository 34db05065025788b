#pragma once

#include <complex>

#include "fibercap/config.hpp"

namespace fibercap {

/// f(t), unit energy.
double pulse_time(const PulseShape& p, double t);

/// f(omega) = \int f(t) e^{i omega t} dt. The inverse carries 1/(2 pi).
std::complex<double> pulse_spectrum(const PulseShape& p, double omega);

/// Pulse after propagating a normalized distance xi with no loss or
/// nonlinearity: spectrum multiplied by exp(i beta2 omega^2 z / 2), z = xi L_d.
/// `dispersion_sign` is sign(beta2).
std::complex<double> dispersed_pulse(const PulseShape& p, double dispersion_sign, double xi,
                                     double t);

/// RMS width of |f_xi(t)|^2.
double dispersed_rms_width(const PulseShape& p, double xi);

}  // namespace fibercap
