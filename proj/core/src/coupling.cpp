#include "fibercap/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <numbers>

#include "fibercap/error.hpp"
#include "fibercap/parallel.hpp"
#include "fibercap/pulse.hpp"
#include "fibercap/quadrature.hpp"

namespace fibercap {

namespace {

constexpr cd kI{0.0, 1.0};

double dispersion_sign(const SystemConfig& cfg) { return cfg.beta2 < 0.0 ? -1.0 : 1.0; }

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Power profiles

PowerProfiles::PowerProfiles(const SystemConfig& cfg)
    : xi_span_(cfg.xi_span()), loss_per_xi_(cfg.alpha * cfg.dispersion_length),
      n_spans_(cfg.n_spans) {}

double PowerProfiles::signal(double xi) const {
    const double local = std::fmod(xi, xi_span_);
    return std::exp(-loss_per_xi_ * local);
}

int PowerProfiles::amplifier_count(double xi) const {
    const int count = static_cast<int>(std::floor(xi / xi_span_));
    return std::clamp(count, 0, n_spans_ - 1);
}

double PowerProfiles::noise(double xi) const {
    const double frac = static_cast<double>(amplifier_count(xi)) / n_spans_;
    return frac * frac * signal(xi);
}

double PowerProfiles::signal_noise(double xi) const {
    return std::sqrt(noise(xi) * signal(xi));
}

// ---------------------------------------------------------------------------
// Single coefficients

cd ctilde_closed(const SystemConfig& cfg, int m, int n, double xi) {
    const double tau = cfg.symbol_period / cfg.pulse.t0;
    const double w = 1.0 + xi * xi;
    const double amp = tau / std::sqrt(2.0 * std::numbers::pi * w);
    const double mag = -static_cast<double>(m * m + n * n) * tau * tau / (2.0 * w);
    const double phase = dispersion_sign(cfg) * xi * m * n * tau * tau / w;
    return kI * amp * std::exp(mag) * std::polar(1.0, phase);
}

namespace {

cd time_quadrature(const SystemConfig& cfg, int m, int n, double xi, double panel_width,
                   int order) {
    const double T = cfg.symbol_period;
    const double s = dispersion_sign(cfg);
    const int p = m + n;
    const double sigma = dispersed_rms_width(cfg.pulse, xi);
    const double lo = std::min({0, m, n, p}) * T - 14.0 * sigma;
    const double hi = std::max({0, m, n, p}) * T + 14.0 * sigma;
    const int panels = std::max(4, static_cast<int>(std::ceil((hi - lo) / panel_width)));
    const quad::Rule rule = quad::composite_uniform(lo, hi, panels, order);
    cd acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = rule.nodes[i];
        const cd g0 = dispersed_pulse(cfg.pulse, s, xi, t);
        const cd gm = dispersed_pulse(cfg.pulse, s, xi, t - m * T);
        const cd gn = dispersed_pulse(cfg.pulse, s, xi, t - n * T);
        const cd gp = dispersed_pulse(cfg.pulse, s, xi, t - p * T);
        acc += rule.weights[i] * std::conj(g0) * gm * gn * std::conj(gp);
    }
    return kI * T * acc;
}

}  // namespace

QuadratureReport ctilde_time_report(const SystemConfig& cfg, int m, int n, double xi,
                                    double rel_tol) {
    const double sigma = dispersed_rms_width(cfg.pulse, xi);
    const cd coarse = time_quadrature(cfg, m, n, xi, sigma, 16);
    const cd fine = time_quadrature(cfg, m, n, xi, 0.5 * sigma, 16);
    // Magnitude of C~_00 at this xi, used as the floor for relative comparisons.
    const double scale = cfg.symbol_period / (2.0 * sigma * std::sqrt(std::numbers::pi));
    const double delta = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-6 * scale);
    if (delta > rel_tol)
        throw NumericalError("ctilde_time: refinement change " + fmt_g(delta) +
                             " exceeds tolerance at m=" + std::to_string(m) +
                             " n=" + std::to_string(n) + " xi=" + std::to_string(xi));
    return {fine, delta};
}

cd ctilde_time(const SystemConfig& cfg, int m, int n, double xi) {
    return ctilde_time_report(cfg, m, n, xi).value;
}

FrequencyDomainCoupling::FrequencyDomainCoupling(const SystemConfig& cfg,
                                                 FrequencyQuadratureOptions opt)
    : cfg_(cfg), opt_(opt) {
    // The lattice periodizes time with period 2 pi / step; it must exceed the
    // span of the shifted, dispersed pulses with a wide margin.
    const double sigma = dispersed_rms_width(cfg.pulse, opt.max_xi);
    const double period = 2.0 * opt.max_shift * cfg.symbol_period + 40.0 * sigma;
    const double step = 2.0 * std::numbers::pi / period;
    coarse_ = build(step);
    fine_ = build(0.75 * step);
}

FrequencyDomainCoupling::Lattice FrequencyDomainCoupling::build(double step) const {
    const double wmax = opt_.cutoff_t0 / cfg_.pulse.t0;
    const int K = static_cast<int>(std::ceil(wmax / step));
    const int N = 2 * K + 1;
    Lattice g;
    g.step = step;
    g.omega.resize(N);
    std::vector<double> f(N);
    for (int i = 0; i < N; ++i) {
        g.omega[i] = (i - K) * step;
        // f* = f for the real Gaussian spectrum.
        f[i] = pulse_spectrum(cfg_.pulse, g.omega[i]).real();
    }
    // inner(i, j) over offsets w1 = (i - K) step, w2 = (j - K) step.
    g.inner = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        const int di = i - K;
        for (int j = 0; j < N; ++j) {
            const int dj = j - K;
            double s = 0.0;
            for (int k = 0; k < N; ++k) {
                const int a = k + di, b = k + dj, c = k + di + dj;
                if (a < 0 || a >= N || b < 0 || b >= N || c < 0 || c >= N) continue;
                s += f[k] * f[a] * f[b] * f[c];
            }
            g.inner(i, j) = s * step * step * step;
        }
    }
    return g;
}

cd FrequencyDomainCoupling::sum(const Lattice& g, int m, int n, double xi) const {
    const double T = cfg_.symbol_period;
    const double chirp = cfg_.beta2 * cfg_.dispersion_length * xi;
    const std::size_t N = g.omega.size();
    cd acc{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) {
        const double w1 = g.omega[i];
        cd row{0.0, 0.0};
        for (std::size_t j = 0; j < N; ++j) {
            const double v = g.inner(i, j);
            if (v == 0.0) continue;
            const double w2 = g.omega[j];
            row += v * std::polar(1.0, -(w1 * w2 * chirp + w1 * m * T + w2 * n * T));
        }
        acc += row;
    }
    return kI * T * acc / std::pow(2.0 * std::numbers::pi, 3);
}

QuadratureReport FrequencyDomainCoupling::evaluate(int m, int n, double xi) const {
    const cd coarse = sum(coarse_, m, n, xi);
    const cd fine = sum(fine_, m, n, xi);
    const double sigma = dispersed_rms_width(cfg_.pulse, xi);
    const double scale = cfg_.symbol_period / (2.0 * sigma * std::sqrt(std::numbers::pi));
    const double delta = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-6 * scale);
    if (delta > opt_.rel_tol)
        throw NumericalError("ctilde_freq: refinement change " + fmt_g(delta) +
                             " exceeds tolerance at m=" + std::to_string(m) +
                             " n=" + std::to_string(n) + " xi=" + std::to_string(xi));
    return {fine, delta};
}

cd ctilde_freq(const SystemConfig& cfg, int m, int n, double xi) {
    return FrequencyDomainCoupling(cfg)(m, n, xi);
}

// ---------------------------------------------------------------------------
// Tensor

double CouplingTensor::ss_sum() const {
    double s = 0.0;
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n)
            if (m != 0 && n != 0) s += std::norm(c(m, n));
    return s;
}

double CouplingTensor::sn_sum() const {
    double s = 0.0;
    for (int m = -M; m <= M; ++m)
        for (int n = -M; n <= M; ++n)
            if (m != 0 && n != 0) s += std::norm(k(m, n));
    return s;
}

CouplingTensor CouplingTensor::truncated(int new_M) const {
    if (new_M > M || new_M < 0) throw ValidationError("M", "truncation window out of range");
    CouplingTensor t = *this;
    t.M = new_M;
    const int off = M - new_M, w = 2 * new_M + 1;
    t.C = C.block(off, off, w, w);
    t.K = K.block(off, off, w, w);
    return t;
}

std::vector<double> span_breakpoints(const PowerProfiles& prof, int n_xi) {
    const double L = prof.xi_span();
    const double a = prof.loss_per_xi() * L;
    const int n_uniform = n_xi / 2;
    const int n_mass = n_xi - n_uniform;
    std::vector<double> bp;
    for (int i = 0; i <= n_uniform; ++i) bp.push_back(L * i / std::max(1, n_uniform));
    if (a > 1e-12) {
        for (int i = 1; i < n_mass; ++i) {
            const double frac = static_cast<double>(i) / n_mass;
            bp.push_back(-std::log(1.0 - frac * (1.0 - std::exp(-a))) / prof.loss_per_xi());
        }
    } else {
        for (int i = 1; i < n_mass; ++i) bp.push_back(L * (i + 0.5) / n_mass);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [L](double x, double y) { return std::abs(x - y) < 1e-12 * L; }),
             bp.end());
    return bp;
}

LinkRule link_rule(const SystemConfig& cfg, int n_xi, int gl_order) {
    const PowerProfiles prof(cfg);
    const auto local_bp = span_breakpoints(prof, n_xi);
    const quad::Rule base = quad::gauss_legendre(gl_order);
    LinkRule out;
    for (int s = 0; s < cfg.n_spans; ++s) {
        std::vector<double> bp(local_bp);
        for (auto& b : bp) b += s * prof.xi_span();
        const quad::Rule r = quad::composite(bp, base);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            out.nodes.push_back(r.nodes[i]);
            out.signal_weights.push_back(r.weights[i] * prof.signal(r.nodes[i]));
            out.signal_noise_weights.push_back(r.weights[i] * prof.signal_noise(r.nodes[i]));
        }
    }
    return out;
}

CouplingTensor integrate_tensor(const SystemConfig& cfg, int M, int n_xi, TensorOptions opt) {
    if (M < 1) throw ValidationError("M", "memory window must be >= 1");
    if (n_xi < 4) throw ValidationError("n_xi", "need at least 4 panels per span");

    const LinkRule rule = link_rule(cfg, n_xi, opt.gl_order);
    const auto& xs = rule.nodes;
    const auto& wc = rule.signal_weights;
    const auto& wk = rule.signal_noise_weights;

    const int W = 2 * M + 1;
    const double work = static_cast<double>(W) * W * static_cast<double>(xs.size());
    if (work > opt.max_work)
        throw ValidationError("M", "tensor work " + std::to_string(work) +
                                       " exceeds budget " + std::to_string(opt.max_work));

    CouplingTensor t;
    t.M = M;
    t.n_xi = n_xi;
    t.C = Eigen::MatrixXcd::Zero(W, W);
    t.K = Eigen::MatrixXcd::Zero(W, W);
    t.xi_nodes = xs;
    t.fingerprint = cfg.fingerprint();

    const std::size_t Q = xs.size();
    if (opt.evaluator == CTildeEvaluator::time_quadrature) {
        parallel_for(static_cast<std::size_t>(W), opt.threads, [&](std::size_t row) {
            const int m = static_cast<int>(row) - M;
            for (int n = -M; n <= M; ++n) {
                cd c{0.0, 0.0}, k{0.0, 0.0};
                for (std::size_t q = 0; q < Q; ++q) {
                    const cd v = ctilde_time(cfg, m, n, xs[q]);
                    c += wc[q] * v;
                    k += wk[q] * v;
                }
                t.C(row, n + M) = c;
                t.K(row, n + M) = k;
            }
        });
        return t;
    }

    // Closed form, factorized per node: amp * exp(-(m^2+n^2) u) * exp(i m n v).
    const double tau = cfg.symbol_period / cfg.pulse.t0;
    const double sgn = dispersion_sign(cfg);
    std::vector<double> amp(Q), u(Q), v(Q);
    for (std::size_t q = 0; q < Q; ++q) {
        const double w = 1.0 + xs[q] * xs[q];
        amp[q] = tau / std::sqrt(2.0 * std::numbers::pi * w);
        u[q] = tau * tau / (2.0 * w);
        v[q] = sgn * xs[q] * tau * tau / w;
    }
    constexpr double kNegligible = 1e-22;

    parallel_for(static_cast<std::size_t>(W), opt.threads, [&](std::size_t row) {
        const int m = static_cast<int>(row) - M;
        std::vector<cd> c_row(W, cd{0.0, 0.0}), k_row(W, cd{0.0, 0.0});
        for (std::size_t q = 0; q < Q; ++q) {
            const double em = std::exp(-static_cast<double>(m) * m * u[q]);
            if (em < kNegligible) continue;
            const cd rot = std::polar(1.0, m * v[q]);
            const double step = std::exp(-2.0 * u[q]);
            // Walk n = 0, 1, 2, ... and n = -1, -2, ... outward from the peak.
            for (int dir = 0; dir < 2; ++dir) {
                const cd r = dir == 0 ? rot : std::conj(rot);
                double g = dir == 0 ? 1.0 : std::exp(-u[q]);
                double ratio = dir == 0 ? std::exp(-u[q]) : std::exp(-3.0 * u[q]);
                cd z = dir == 0 ? cd{1.0, 0.0} : std::conj(rot);
                for (int k = 0; k <= M; ++k) {
                    const int n = dir == 0 ? k : -(k + 1);
                    if (n < -M) break;
                    const double mag = em * g;
                    if (mag < kNegligible) break;
                    const cd val = amp[q] * mag * z;
                    c_row[n + M] += wc[q] * val;
                    k_row[n + M] += wk[q] * val;
                    g *= ratio;
                    ratio *= step;
                    z *= r;
                }
            }
        }
        for (int j = 0; j < W; ++j) {
            t.C(row, j) = kI * c_row[j];
            t.K(row, j) = kI * k_row[j];
        }
    });
    return t;
}

// ---------------------------------------------------------------------------
// Memory selection

DecayFit fit_decay(const CouplingTensor& t, int m_lo, int m_hi) {
    m_hi = std::min(m_hi, t.M);
    if (m_hi - m_lo < 1) throw ValidationError("m_hi", "need at least two points for the decay fit");
    std::vector<double> xs, ys;
    for (int m = m_lo; m <= m_hi; ++m) {
        const double a = std::abs(t.c(m, 0));
        if (a <= 0.0) continue;
        xs.push_back(m);
        ys.push_back(std::log(a));
    }
    const double n = static_cast<double>(xs.size());
    if (n < 2) throw NumericalError("fit_decay: coefficients vanish along the m axis");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    DecayFit f;
    const double den = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss_res += r * r;
    }
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

double tail_mass_fraction(const CouplingTensor& t, int window, const DecayFit& fit) {
    double total = 0.0, inside = 0.0, shell = 0.0;
    for (int m = -t.M; m <= t.M; ++m)
        for (int n = -t.M; n <= t.M; ++n) {
            const double e = std::norm(t.c(m, n));
            total += e;
            if (std::abs(m) <= window && std::abs(n) <= window) inside += e;
            if (std::max(std::abs(m), std::abs(n)) == t.M) shell += e;
        }
    const double q = std::exp(2.0 * fit.slope);
    const double extra = q < 1.0 ? shell * q / (1.0 - q) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(extra)) return 1.0;
    return (total - inside + extra) / (total + extra);
}

MemorySelection select_memory(const CouplingTensor& full, double tail_tol, double min_r_squared) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw ValidationError("tail_tol", "must lie in (0, 1)");
    MemorySelection sel;
    sel.computed_M = full.M;
    sel.fit = fit_decay(full, 1, full.M);
    if (sel.fit.r_squared < min_r_squared)
        throw NumericalError("select_memory: exponential decay fit R^2 = " +
                             std::to_string(sel.fit.r_squared) + " below " +
                             std::to_string(min_r_squared));
    for (int w = 1; w <= full.M; ++w) {
        const double tail = tail_mass_fraction(full, w, sel.fit);
        if (tail < tail_tol) {
            sel.M = w;
            sel.tail_mass = tail;
            return sel;
        }
    }
    throw NumericalError("select_memory: tail mass still above tolerance at M_max = " +
                         std::to_string(full.M) + "; increase M_max");
}

MemorySelection select_memory(const SystemConfig& cfg, double tail_tol, MemoryOptions opt) {
    const CouplingTensor full = integrate_tensor(cfg, opt.M_max, opt.n_xi, opt.tensor);
    return select_memory(full, tail_tol, opt.min_r_squared);
}

}  // namespace fibercap
