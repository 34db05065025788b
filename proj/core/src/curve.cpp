#include "fibercap/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "fibercap/error.hpp"
#include "fibercap/rng.hpp"

namespace fibercap {

std::vector<std::string> parse_bound_list(const std::string& csv) {
    static const std::vector<std::string> known{"i0", "i1", "i1_envelope", "i2", "ss", "gn", "awgn"};
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (std::find(known.begin(), known.end(), item) == known.end())
            throw ValidationError("bounds", "unknown bound '" + item + "'");
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    if (out.empty()) throw ValidationError("bounds", "no bounds requested");
    return out;
}

namespace {

RippleDistribution rescale(RippleDistribution d, double S) {
    const double r = S / d.total_power();
    for (auto& s : d.S_levels) s *= r;
    for (auto& rho : d.rho_levels) rho *= std::sqrt(r);
    return d;
}

bool wants(const CurveOptions& o, const char* name) {
    return std::find(o.bounds.begin(), o.bounds.end(), name) != o.bounds.end();
}

}  // namespace

CapacityCurve capacity_curve(const SystemConfig& cfg, const CouplingTensor& t,
                             const CurveOptions& opt, std::vector<RippleDump>* dumps) {
    if (opt.powers_dbm.empty()) throw ValidationError("powers", "empty power grid");
    const double N = cfg.noise_power();
    if (!(N > 0.0)) throw ValidationError("noise_density_w_per_hz", "capacity bounds need N > 0");
    if (wants(opt, "gn") && !opt.averaged_sum)
        throw ValidationError("bounds", "gn requested without an averaged coefficient sum");

    const double k = kappa(cfg, t);
    const NoiseLaw law{N, k, opt.surrogate};
    const double S1 = k > 0.0 ? s1_power(k, N) : std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    CapacityCurve curve;
    curve.fingerprint = cfg.fingerprint() + "/" + t.fingerprint;
    curve.seed = opt.seed;
    std::vector<std::optional<RippleDistribution>> warm(opt.levels.size());

    for (std::size_t ip = 0; ip < opt.powers_dbm.size(); ++ip) {
        const double dbm = opt.powers_dbm[ip];
        const double S = dbm_to_watt(dbm);
        auto push = [&](const std::string& name, double bits, double se = 0.0, std::string note = {}) {
            curve.points.push_back({dbm, name, bits, se, std::move(note)});
        };
        if (wants(opt, "awgn")) push("awgn", std::log2(1.0 + S / N));
        if (wants(opt, "ss")) push("ss", rate_ss(cfg, t, S, N));
        if (wants(opt, "gn")) push("gn", rate_gn(cfg, *opt.averaged_sum, S, N));
        if (wants(opt, "i0")) push("i0", bound_I0(k, S, N));
        if (wants(opt, "i1") || wants(opt, "i1_envelope")) {
            const bool below = !(S >= S1);
            if (wants(opt, "i1")) {
                if (below) push("i1", nan, 0.0, "below S1");
                else if (S > S1 * i1_max_power_ratio()) push("i1", nan, 0.0, "no root");
                else push("i1", bound_I1(k, S, N).bits);
            }
            if (wants(opt, "i1_envelope")) {
                if (below) push("i1_envelope", nan, 0.0, "below S1");
                else push("i1_envelope", bound_I1_envelope(k, S, N).bits);
            }
        }
        if (wants(opt, "i2")) {
            std::optional<RippleDistribution> fewer;  // optimum with fewer levels at this power
            for (std::size_t iq = 0; iq < opt.levels.size(); ++iq) {
                const std::size_t q = opt.levels[iq];
                OptimizeOptions oo = opt.optimize;
                if (warm[iq]) oo.extra_starts.push_back(rescale(*warm[iq], S));
                if (fewer && fewer->levels() <= q) oo.extra_starts.push_back(*fewer);
                const auto r = optimize_ripple(q, S, law, derive_seed(opt.seed, ip * 64 + q), oo);
                warm[iq] = r.dist;
                fewer = r.dist;
                push("i2_q" + std::to_string(q), r.mi.bits, r.mi.stderr_bits,
                     r.budget_exhausted ? "budget exhausted" : "");
                if (dumps)
                    dumps->push_back({dbm, S, q, r.dist, r.mi, r.evaluations, r.budget_exhausted, r.best_start});
            }
        }
    }
    return curve;
}

void write_curve_csv(std::ostream& os, const CapacityCurve& c, const std::string& surrogate) {
    char buf[256];
    os << "# fingerprint " << c.fingerprint << '\n';
    os << "# seed " << c.seed << '\n';
    os << "# surrogate " << surrogate << '\n';
    os << "power_dBm,bound,bits_per_symbol,stderr,note\n";
    for (const auto& p : c.points) {
        std::snprintf(buf, sizeof buf, "%.6f,%s,%.12g,%.6g,%s\n", p.power_dbm, p.bound.c_str(), p.bits,
                      p.stderr_bits, p.note.c_str());
        os << buf;
    }
}

}  // namespace fibercap
