#include "fibercap/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>

#include "fibercap/error.hpp"

namespace fibercap {

namespace {

constexpr double kPs = 1e-12;
constexpr double kKm = 1e3;

// 10 log10(e): dB -> neper-power conversion.
const double kDbPerNeper = 10.0 / std::numbers::ln10;

void require_finite(const char* field, double v) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

void require_positive(const char* field, double v) {
    require_finite(field, v);
    if (!(v > 0.0)) throw ValidationError(field, "must be > 0");
}

void require_non_negative(const char* field, double v) {
    require_finite(field, v);
    if (v < 0.0) throw ValidationError(field, "must be >= 0");
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

PulseShape PulseShape::gaussian(double fwhm_s) {
    PulseShape p;
    p.kind = PulseKind::gaussian;
    p.fwhm = fwhm_s;
    p.t0 = fwhm_s / (2.0 * std::sqrt(std::numbers::ln2));
    p.amplitude = 1.0 / std::sqrt(p.t0 * std::sqrt(std::numbers::pi));
    return p;
}

double SystemConfig::rho(double power) const {
    if (!(power > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(noise_power() / power);
}

std::string SystemConfig::fingerprint() const {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const double fields[] = {alpha,          beta2,        gamma,     span_length,
                             symbol_period,  pulse.fwhm,   noise_density, bandwidth};
    h = fnv1a(fields, sizeof(fields), h);
    const int ns = n_spans;
    h = fnv1a(&ns, sizeof(ns), h);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

EngineeringParams SystemConfig::to_engineering() const {
    EngineeringParams p;
    p.alpha_db_per_km = alpha * kDbPerNeper * kKm;
    p.beta2_ps2_per_km = beta2 / (kPs * kPs) * kKm;
    p.gamma_per_w_per_km = gamma * kKm;
    p.span_length_km = span_length / kKm;
    p.n_spans = n_spans;
    p.symbol_rate_gbaud = 1.0 / symbol_period / 1e9;
    p.fwhm_ps = pulse.fwhm / kPs;
    p.noise_density_w_per_hz = noise_density;
    p.bandwidth_ghz = bandwidth / 1e9;
    return p;
}

SystemConfig make_config(const EngineeringParams& p) {
    require_non_negative("alpha_db_per_km", p.alpha_db_per_km);
    require_finite("beta2_ps2_per_km", p.beta2_ps2_per_km);
    if (p.beta2_ps2_per_km == 0.0)
        throw ValidationError("beta2_ps2_per_km", "must be non-zero (dispersion length undefined)");
    require_non_negative("gamma_per_w_per_km", p.gamma_per_w_per_km);
    require_positive("span_length_km", p.span_length_km);
    if (p.n_spans < 1) throw ValidationError("n_spans", "must be >= 1");
    require_positive("symbol_rate_gbaud", p.symbol_rate_gbaud);
    require_positive("fwhm_ps", p.fwhm_ps);
    require_non_negative("noise_density_w_per_hz", p.noise_density_w_per_hz);
    require_finite("bandwidth_ghz", p.bandwidth_ghz);

    SystemConfig c;
    c.alpha = p.alpha_db_per_km / kDbPerNeper / kKm;
    c.beta2 = p.beta2_ps2_per_km * kPs * kPs / kKm;
    c.gamma = p.gamma_per_w_per_km / kKm;
    c.span_length = p.span_length_km * kKm;
    c.n_spans = p.n_spans;
    c.symbol_period = 1.0 / (p.symbol_rate_gbaud * 1e9);
    c.pulse = PulseShape::gaussian(p.fwhm_ps * kPs);
    c.noise_density = p.noise_density_w_per_hz;
    c.bandwidth = p.bandwidth_ghz > 0.0 ? p.bandwidth_ghz * 1e9 : 1.0 / c.symbol_period;
    c.dispersion_length = c.pulse.t0 * c.pulse.t0 / std::abs(c.beta2);
    return c;
}

EngineeringParams reference_link(int n_spans, double noise_density_w_per_hz) {
    EngineeringParams p;
    p.n_spans = n_spans;
    p.noise_density_w_per_hz = noise_density_w_per_hz;
    return p;
}

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

}  // namespace fibercap
