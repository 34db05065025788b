#include "fibercap/ripple.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "fibercap/error.hpp"
#include "fibercap/special.hpp"

namespace fibercap {

double RippleDistribution::total_power() const {
    double s = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) s += p[a] * (S_levels[a] + rho_levels[a] * rho_levels[a]);
    return s;
}

void RippleDistribution::validate() const {
    if (p.empty()) throw ValidationError("p", "at least one level required");
    if (S_levels.size() != p.size() || rho_levels.size() != p.size())
        throw ValidationError("S_levels/rho_levels", "length must match p");
    double sum = 0.0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (!(p[a] >= 0.0) || !std::isfinite(p[a])) throw ValidationError("p", "weights must be >= 0");
        if (!(S_levels[a] > 0.0) || !std::isfinite(S_levels[a]))
            throw ValidationError("S_levels", "variances must be > 0");
        if (!(rho_levels[a] >= 0.0) || !std::isfinite(rho_levels[a]))
            throw ValidationError("rho_levels", "ring centers must be >= 0");
        sum += p[a];
    }
    if (std::abs(sum - 1.0) > 1e-10) throw ValidationError("p", "weights must sum to 1");
}

RippleDistribution RippleDistribution::gaussian(double S) { return {{1.0}, {S}, {0.0}}; }

RippleDistribution RippleDistribution::two_ring(double S1, double delta, double rho) {
    return {{1.0 - delta, delta}, {S1, S1}, {0.0, rho}};
}

namespace {

// log of per-area density of level a at radius r.
double level_log_density(double S, double rho, double r) {
    const double arg = 2.0 * r * rho / S;
    return -std::log(std::numbers::pi * S) - (r - rho) * (r - rho) / S +
           std::log(bessel_i0_scaled(arg));
}

}  // namespace

double ripple_planar_pdf(const RippleDistribution& d, std::complex<double> x) {
    const double r = std::abs(x);
    double s = 0.0;
    for (std::size_t a = 0; a < d.levels(); ++a) {
        if (d.p[a] == 0.0) continue;
        s += d.p[a] * std::exp(level_log_density(d.S_levels[a], d.rho_levels[a], r));
    }
    return s;
}

double ripple_pdf_polar(const RippleDistribution& d, double r) {
    return r * ripple_planar_pdf(d, {r, 0.0});
}

double ripple_radial_pdf(const RippleDistribution& d, double r) {
    return 2.0 * std::numbers::pi * ripple_pdf_polar(d, r);
}

std::complex<double> ripple_draw(const RippleDistribution& d, Engine& eng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pick = u(eng);
    std::size_t a = 0;
    double acc = d.p[0];
    while (pick >= acc && a + 1 < d.levels()) acc += d.p[++a];
    const double theta = 2.0 * std::numbers::pi * u(eng);
    return std::polar(d.rho_levels[a], theta) + complex_normal(eng, d.S_levels[a]);
}

std::vector<std::complex<double>> ripple_sample(const RippleDistribution& d, std::size_t n,
                                                std::uint64_t seed) {
    d.validate();
    auto eng = make_engine(seed, 0x5249);
    std::vector<std::complex<double>> out(n);
    for (auto& x : out) x = ripple_draw(d, eng);
    return out;
}

}  // namespace fibercap
