#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace fibercap {

enum class PulseKind { gaussian };

/// Unit-energy transmit pulse. For the Gaussian, f(t) = A exp(-t^2 / (2 T0^2))
/// with T0 = fwhm / (2 sqrt(ln 2)) (intensity FWHM) and A = (T0 sqrt(pi))^{-1/2}.
struct PulseShape {
    PulseKind kind = PulseKind::gaussian;
    double fwhm = 0.0;       // s
    double t0 = 0.0;         // s
    double amplitude = 0.0;  // s^{-1/2}

    static PulseShape gaussian(double fwhm_s);
};

/// Link, pulse and noise parameters as a user writes them down.
struct EngineeringParams {
    double alpha_db_per_km = 0.2;
    double beta2_ps2_per_km = -20.0;
    double gamma_per_w_per_km = 1.3;
    double span_length_km = 100.0;
    int n_spans = 1;
    double symbol_rate_gbaud = 28.0;
    double fwhm_ps = 10.0;
    /// Total ASE spectral density accumulated over the link (W/Hz).
    double noise_density_w_per_hz = 0.0;
    /// Noise bandwidth; <= 0 means "equal to the symbol rate".
    double bandwidth_ghz = 0.0;
};

/// SI-normalized physical configuration. Immutable after construction.
class SystemConfig {
public:
    double alpha = 0.0;        // power attenuation, 1/m
    double beta2 = 0.0;        // s^2/m
    double gamma = 0.0;        // 1/(W m)
    double span_length = 0.0;  // m
    int n_spans = 1;
    double symbol_period = 0.0;  // s
    PulseShape pulse;
    double noise_density = 0.0;  // W/Hz, whole link
    double bandwidth = 0.0;      // Hz
    double dispersion_length = 0.0;  // m, T0^2 / |beta2|

    double link_length() const { return span_length * n_spans; }
    /// Normalized link and span lengths in units of L_d.
    double xi_link() const { return link_length() / dispersion_length; }
    double xi_span() const { return span_length / dispersion_length; }

    double noise_power() const { return noise_density * bandwidth; }  // N = D B
    double nonlinear_length(double power) const {
        const double g = gamma * power;
        return g > 0.0 ? 1.0 / g : std::numeric_limits<double>::infinity();
    }
    double epsilon(double power) const { return gamma * power * dispersion_length; }
    double rho(double power) const;

    /// gamma * L_d, the factor turning normalized coefficients into 1/W.
    double nonlinear_scale() const { return gamma * dispersion_length; }

    /// Stable hex digest of all physical fields (16 chars).
    std::string fingerprint() const;

    EngineeringParams to_engineering() const;
};

/// Validates and converts engineering units to SI.
/// Throws ValidationError naming the offending field.
SystemConfig make_config(const EngineeringParams& p);

/// The single-channel link used throughout the examples: 0.2 dB/km,
/// -20 ps^2/km, 1.3 1/W/km, 100 km spans, 28 GBaud, 10 ps Gaussian pulses.
EngineeringParams reference_link(int n_spans, double noise_density_w_per_hz = 0.0);

double dbm_to_watt(double dbm);
double watt_to_dbm(double w);

}  // namespace fibercap
