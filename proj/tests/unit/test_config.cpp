#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fibercap/config.hpp"
#include "fibercap/error.hpp"
#include "fibercap/pulse.hpp"
#include "fibercap/quadrature.hpp"

using namespace fibercap;

TEST(Config, ReferenceLinkLengths) {
    const SystemConfig c = make_config(reference_link(10));
    // 10 ps intensity FWHM
    EXPECT_NEAR(c.pulse.t0, 10e-12 / (2.0 * std::sqrt(std::log(2.0))), 1e-20);
    EXPECT_NEAR(c.pulse.t0, 6.00561e-12, 1e-16);
    EXPECT_NEAR(c.dispersion_length, 1803.4, 0.1);
    EXPECT_DOUBLE_EQ(c.link_length(), 1.0e6);
    EXPECT_NEAR(c.alpha, 0.2 / (10.0 * std::log10(std::numbers::e)) / 1e3, 1e-15);
    EXPECT_DOUBLE_EQ(c.bandwidth, 28e9);
    EXPECT_DOUBLE_EQ(c.nonlinear_length(0.0), INFINITY);
    EXPECT_NEAR(c.nonlinear_length(1e-3), 1.0 / (1.3e-3 * 1e-3), 1e-6);
}

TEST(Config, FingerprintTracksFields) {
    const SystemConfig a = make_config(reference_link(10));
    EXPECT_EQ(a.fingerprint(), make_config(reference_link(10)).fingerprint());
    EXPECT_EQ(a.fingerprint().size(), 16u);
    EXPECT_NE(a.fingerprint(), make_config(reference_link(9)).fingerprint());
    EXPECT_NE(a.fingerprint(), make_config(reference_link(10, 1e-17)).fingerprint());
}

TEST(Config, RoundTripThroughEngineeringUnits) {
    EngineeringParams p = reference_link(3, 2e-17);
    p.bandwidth_ghz = 32.0;
    const SystemConfig c = make_config(p);
    const SystemConfig d = make_config(c.to_engineering());
    EXPECT_EQ(c.fingerprint(), d.fingerprint());
}

TEST(Config, RejectsInvalidFieldsByName) {
    auto field_of = [](EngineeringParams p) {
        try {
            make_config(p);
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string();
    };
    EngineeringParams p = reference_link(1);
    p.beta2_ps2_per_km = 0.0;
    EXPECT_EQ(field_of(p), "beta2_ps2_per_km");
    p = reference_link(1);
    p.n_spans = 0;
    EXPECT_EQ(field_of(p), "n_spans");
    p = reference_link(1);
    p.fwhm_ps = -1.0;
    EXPECT_EQ(field_of(p), "fwhm_ps");
    p = reference_link(1);
    p.noise_density_w_per_hz = -1e-20;
    EXPECT_EQ(field_of(p), "noise_density_w_per_hz");
    p = reference_link(1);
    p.alpha_db_per_km = NAN;
    EXPECT_EQ(field_of(p), "alpha_db_per_km");
}

TEST(Config, DbmConversions) {
    EXPECT_DOUBLE_EQ(dbm_to_watt(0.0), 1e-3);
    EXPECT_NEAR(watt_to_dbm(1.0), 30.0, 1e-12);
    EXPECT_NEAR(watt_to_dbm(dbm_to_watt(-12.5)), -12.5, 1e-12);
}

TEST(Pulse, UnitEnergy) {
    const PulseShape p = PulseShape::gaussian(10e-12);
    const double e = quad::adaptive([&](double t) { return std::pow(pulse_time(p, t), 2); }, -20 * p.t0,
                                    20 * p.t0, 1e-13);
    EXPECT_NEAR(e, 1.0, 1e-10);
}

TEST(Pulse, SpectrumMatchesNumericTransform) {
    const PulseShape p = PulseShape::gaussian(10e-12);
    for (double w : {0.0, 0.3 / p.t0, 1.7 / p.t0}) {
        const double re = quad::adaptive([&](double t) { return pulse_time(p, t) * std::cos(w * t); },
                                         -20 * p.t0, 20 * p.t0, 1e-13 * std::abs(pulse_spectrum(p, 0)));
        const double im = quad::adaptive([&](double t) { return pulse_time(p, t) * std::sin(w * t); },
                                         -20 * p.t0, 20 * p.t0, 1e-13 * std::abs(pulse_spectrum(p, 0)));
        const auto s = pulse_spectrum(p, w);
        EXPECT_NEAR(s.real(), re, 1e-10 * std::abs(pulse_spectrum(p, 0)));
        EXPECT_NEAR(s.imag(), im, 1e-10 * std::abs(pulse_spectrum(p, 0)));
    }
}

TEST(Pulse, DispersionPreservesEnergyAndBroadens) {
    const PulseShape p = PulseShape::gaussian(10e-12);
    for (double xi : {0.5, 2.0, 8.0}) {
        const double L = 40 * p.t0 * (1 + xi);
        const double e = quad::adaptive([&](double t) { return std::norm(dispersed_pulse(p, -1.0, xi, t)); },
                                        -L, L, 1e-12);
        EXPECT_NEAR(e, 1.0, 1e-9);
        const double m2 = quad::composite_uniform(-L, L, 200, 20).integrate(
            [&](double t) { return t * t * std::norm(dispersed_pulse(p, -1.0, xi, t)); });
        EXPECT_NEAR(std::sqrt(m2), dispersed_rms_width(p, xi), 1e-6 * dispersed_rms_width(p, xi));
    }
}
