#include "fibercap/pulse.hpp"

#include <cmath>
#include <numbers>

namespace fibercap {

double pulse_time(const PulseShape& p, double t) {
    const double u = t / p.t0;
    return p.amplitude * std::exp(-0.5 * u * u);
}

std::complex<double> pulse_spectrum(const PulseShape& p, double omega) {
    const double u = omega * p.t0;
    return {p.amplitude * std::sqrt(2.0 * std::numbers::pi) * p.t0 * std::exp(-0.5 * u * u), 0.0};
}

std::complex<double> dispersed_pulse(const PulseShape& p, double dispersion_sign, double xi,
                                     double t) {
    // a = T0^2 (1 - i s xi);  f_xi(t) = A T0 / sqrt(a) exp(-t^2 / (2 a))
    const std::complex<double> a = p.t0 * p.t0 * std::complex<double>(1.0, -dispersion_sign * xi);
    return p.amplitude * p.t0 / std::sqrt(a) * std::exp(-t * t / (2.0 * a));
}

double dispersed_rms_width(const PulseShape& p, double xi) {
    return p.t0 * std::sqrt(0.5 * (1.0 + xi * xi));
}

}  // namespace fibercap
