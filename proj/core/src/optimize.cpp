#include "fibercap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fibercap/bounds.hpp"
#include "fibercap/error.hpp"
#include "fibercap/rng.hpp"

namespace fibercap {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opt) {
    const std::size_t n = x0.size();
    if (n == 0) throw ValidationError("x0", "empty starting point");
    NelderMeadResult res;
    auto eval = [&](const std::vector<double>& x) {
        ++res.evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.initial_step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (res.evals < opt.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double diam = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j) diam = std::max(diam, std::abs(pts[i][j] - pts[best][j]));
        const double spread = fv[worst] - fv[best];
        if (diam <= opt.x_tol || spread <= opt.f_tol * (std::abs(fv[best]) + 1e-300)) {
            res.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;
        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        for (std::size_t j = 0; j < n; ++j)
            xc[j] = outside ? centroid[j] + 0.5 * (xr[j] - centroid[j])
                            : centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < n; ++j) pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
            fv[i] = eval(pts[i]);
        }
    }
    const auto it = std::min_element(fv.begin(), fv.end());
    res.x = pts[it - fv.begin()];
    res.f = *it;
    return res;
}

RippleDistribution decode_ripple(const std::vector<double>& theta, std::size_t q, double S) {
    if (theta.size() != 3 * q) throw DimensionError("decode_ripple: expected 3q coordinates");
    if (!(S > 0.0)) throw DomainError("decode_ripple: S must be positive");
    RippleDistribution d;
    d.p.resize(q);
    d.S_levels.resize(q);
    d.rho_levels.resize(q);
    const double wmax = *std::max_element(theta.begin(), theta.begin() + q);
    double z = 0.0;
    for (std::size_t a = 0; a < q; ++a) z += (d.p[a] = std::exp(std::max(theta[a] - wmax, -700.0)));
    const double root_s = std::sqrt(S);
    for (std::size_t a = 0; a < q; ++a) {
        d.p[a] /= z;
        d.S_levels[a] = S * std::exp(std::clamp(theta[q + a], -60.0, 60.0));
        d.rho_levels[a] = root_s * std::min(std::abs(theta[2 * q + a]), 1e6);
    }
    double spread = 0.0, ring = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
        spread += d.p[a] * d.S_levels[a];
        ring += d.p[a] * d.rho_levels[a] * d.rho_levels[a];
    }
    if (spread >= S || ring <= 0.0) {
        for (auto& s : d.S_levels) s *= S / spread;
        if (spread >= S) std::fill(d.rho_levels.begin(), d.rho_levels.end(), 0.0);
    } else {
        const double k = std::sqrt((S - spread) / ring);
        for (auto& r : d.rho_levels) r *= k;
    }
    return d;
}

std::vector<double> encode_ripple(const RippleDistribution& d, double S) {
    const std::size_t q = d.levels();
    std::vector<double> th(3 * q);
    for (std::size_t a = 0; a < q; ++a) {
        th[a] = std::log(std::max(d.p[a], 1e-300));
        th[q + a] = std::log(d.S_levels[a] / S);
        th[2 * q + a] = d.rho_levels[a] / std::sqrt(S);
    }
    return th;
}

RippleDistribution pad_levels(const RippleDistribution& d, std::size_t q, double eps) {
    RippleDistribution out = d;
    while (out.levels() < q) {
        out.p.push_back(eps);
        out.S_levels.push_back(d.S_levels.back());
        out.rho_levels.push_back(d.rho_levels.back());
    }
    const double z = std::accumulate(out.p.begin(), out.p.end(), 0.0);
    for (auto& p : out.p) p /= z;
    return out;
}

OptimizeResult optimize_ripple(std::size_t q, double S, const NoiseLaw& law, std::uint64_t seed,
                               const OptimizeOptions& opt) {
    if (q < 2) throw ValidationError("q", "ripple optimization needs at least two levels");
    if (!(S > 0.0)) throw DomainError("optimize_ripple: S must be positive");
    if (opt.budget < 1) throw ValidationError("budget", "budget must be positive");

    struct Start {
        std::string label;
        RippleDistribution d;
    };
    std::vector<Start> starts;
    for (const auto& e : opt.extra_starts) {
        if (e.levels() > q) continue;
        RippleDistribution r = pad_levels(e, q);
        starts.push_back({"warm", decode_ripple(encode_ripple(r, S), q, S)});
    }
    if (law.kappa > 0.0) {
        const double S1 = s1_power(law.kappa, law.N);
        if (S >= S1 && S <= S1 * i1_max_power_ratio()) {
            const I1Result i1 = bound_I1(law.kappa, S, law.N);
            if (std::isfinite(i1.rho2) && i1.delta > 0.0) {
                const auto two = RippleDistribution::two_ring(S1, i1.delta, std::sqrt(i1.rho2));
                starts.push_back({"two-ring", decode_ripple(encode_ripple(pad_levels(two, q), S), q, S)});
            }
        }
    }
    {
        RippleDistribution nested;
        for (std::size_t a = 0; a < q; ++a) {
            nested.p.push_back(1.0 / q);
            nested.S_levels.push_back(S / (q * q));
            nested.rho_levels.push_back(std::sqrt(S * a / q));
        }
        starts.push_back({"nested", decode_ripple(encode_ripple(nested, S), q, S)});
    }
    Engine eng = make_engine(seed, 0x0971);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int k = 0; static_cast<int>(starts.size()) < std::max(opt.starts, 1); ++k) {
        std::vector<double> th(3 * q);
        for (std::size_t a = 0; a < q; ++a) {
            th[a] = nd(eng);
            th[q + a] = std::log(0.01) + std::log(100.0) * ud(eng);
            th[2 * q + a] = 2.0 * ud(eng);
        }
        starts.push_back({"random" + std::to_string(k), decode_ripple(th, q, S)});
    }

    const std::uint64_t search_seed = derive_seed(seed, 0x5EA);
    MIOptions mo;
    mo.threads = opt.threads;
    auto objective = [&](const std::vector<double>& th) {
        for (double v : th)
            if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        try {
            return -mi_estimate(decode_ripple(th, q, S), law, opt.search_samples, search_seed, mo).bits;
        } catch (const ValidationError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    OptimizeResult out;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    int remaining = opt.budget;
    for (std::size_t i = 0; i < starts.size() && remaining > 0; ++i) {
        NelderMeadOptions no;
        no.max_evals = remaining / static_cast<int>(starts.size() - i);
        if (no.max_evals < 1) break;
        no.f_tol = 1e-9;
        no.x_tol = 1e-6;
        no.initial_step = 0.3;
        const auto r = nelder_mead(objective, encode_ripple(starts[i].d, S), no);
        remaining -= r.evals;
        out.evaluations += r.evals;
        if (r.f < best_f) {
            best_f = r.f;
            best_x = r.x;
            out.best_start = starts[i].label;
            out.budget_exhausted = !r.converged;
        }
    }
    out.dist = decode_ripple(best_x, q, S);
    mo.threads = opt.threads;
    out.mi = mi_estimate(out.dist, law, opt.final_samples, derive_seed(seed, 0xF1A), mo);
    return out;
}

OptimizeResult optimize_ripple(std::size_t q, double S, double N, const SystemConfig& cfg,
                               const CouplingTensor& t, int budget, std::uint64_t seed,
                               Surrogate kind) {
    NoiseLaw law{N, kappa(cfg, t), kind};
    OptimizeOptions opt;
    opt.budget = budget;
    return optimize_ripple(q, S, law, seed, opt);
}

}  // namespace fibercap
