#include "fibercap/mutual_info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fibercap/error.hpp"
#include "fibercap/parallel.hpp"
#include "fibercap/special.hpp"

namespace fibercap {

Surrogate parse_surrogate(const std::string& name) {
    if (name == "level_spread") return Surrogate::level_spread;
    if (name == "average_power") return Surrogate::average_power;
    throw ValidationError("surrogate", "unknown surrogate '" + name + "'");
}

std::string to_string(Surrogate s) {
    return s == Surrogate::level_spread ? "level_spread" : "average_power";
}

double NoiseLaw::variance(const RippleDistribution& d, std::size_t level) const {
    const double s = kind == Surrogate::level_spread ? d.S_levels[level] : d.total_power();
    const double s2 = s * s;
    return N * (1.0 + 6.0 * N * kappa * s2 * s2);
}

namespace {

constexpr std::size_t kChunk = 4096;

struct Level {
    double p, rho, v, log_norm;  // log_norm = log(p / (pi v))
};

std::vector<Level> received_levels(const RippleDistribution& d, const NoiseLaw& law) {
    std::vector<Level> lv;
    for (std::size_t a = 0; a < d.levels(); ++a) {
        const double v = d.S_levels[a] + law.variance(d, a);
        lv.push_back({d.p[a], d.rho_levels[a], v,
                      d.p[a] > 0.0 ? std::log(d.p[a] / (std::numbers::pi * v)) : -INFINITY});
    }
    return lv;
}

double log_density(const std::vector<Level>& lv, double r) {
    // streaming log-sum-exp
    double best = -INFINITY, s = 0.0;
    for (const Level& l : lv) {
        if (l.p <= 0.0) continue;
        const double dr = r - l.rho;
        const double t = l.log_norm - dr * dr / l.v + std::log(bessel_i0_scaled(2.0 * r * l.rho / l.v));
        if (t > best) {
            s = s * std::exp(best - t) + 1.0;
            best = t;
        } else {
            s += std::exp(t - best);
        }
    }
    return best + std::log(s);
}

// Fixed-shape pairwise reduction so the sum is independent of scheduling.
double pairwise(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

}  // namespace

double received_log_density(const RippleDistribution& d, const NoiseLaw& law, double r) {
    return log_density(received_levels(d, law), r);
}

MIResult mi_estimate(const RippleDistribution& d, const NoiseLaw& law, std::size_t n_samples,
                     std::uint64_t seed, const MIOptions& opt) {
    d.validate();
    if (!(law.N > 0.0)) throw DomainError("mi_estimate: noise power must be positive");
    if (!(law.kappa >= 0.0)) throw DomainError("mi_estimate: kappa must be non-negative");
    if (n_samples < 2) throw ValidationError("n_samples", "need at least two samples");
    const auto lv = received_levels(d, law);

    double h_cond = 0.0;  // nats
    for (std::size_t a = 0; a < d.levels(); ++a)
        if (d.p[a] > 0.0) h_cond += d.p[a] * std::log(std::numbers::pi * std::numbers::e * law.variance(d, a));

    const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<double> sum(n_chunks), sum2(n_chunks);
    parallel_for(n_chunks, opt.threads, [&](std::size_t c) {
        Engine eng = make_engine(seed, c);
        std::uniform_real_distribution<double> ud(0.0, 2.0 * std::numbers::pi);
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        const std::size_t lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            // one (theta, z) per index, shared by all levels
            const double th = ud(eng);
            const double zr = nd(eng), zi = nd(eng);
            double v = 0.0;
            for (const Level& l : lv) {
                if (l.p <= 0.0) continue;
                const double sv = std::sqrt(l.v);
                const std::complex<double> y = std::polar(l.rho, th) + std::complex<double>(sv * zr, sv * zi);
                v -= l.p * log_density(lv, std::abs(y));
            }
            s += v;
            s2 += v * v;
        }
        sum[c] = s;
        sum2[c] = s2;
    });
    const double n = static_cast<double>(n_samples);
    const double mean = pairwise(sum, 0, n_chunks) / n;
    const double var = std::max(0.0, pairwise(sum2, 0, n_chunks) / n - mean * mean) * n / (n - 1.0);

    MIResult r;
    r.bits = (mean - h_cond) * std::numbers::log2e;
    r.stderr_bits = std::sqrt(var / n) * std::numbers::log2e;
    r.n_samples = n_samples;
    r.flagged = r.stderr_bits > opt.stderr_tol;
    return r;
}

}  // namespace fibercap
