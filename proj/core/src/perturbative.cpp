#include "fibercap/perturbative.hpp"

#include <algorithm>
#include <cmath>

#include "fibercap/error.hpp"
#include "fibercap/parallel.hpp"
#include "fibercap/rng.hpp"

namespace fibercap {

namespace {

using cd = std::complex<double>;

// out_k += sum_{m,n} C_mn a_{k+n} b_{k+m} conj(c_{k+m+n})
void accumulate_triple(const std::vector<cd>& crow, int M, const CVector& a, const CVector& b,
                       const CVector& c, CVector& out) {
    const int d = static_cast<int>(a.size());
    const int W = 2 * M + 1;
    CVector cc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) cc[i] = std::conj(c[i]);
    for (int k = 0; k < d; ++k) {
        cd acc{};
        const int m_lo = std::max(-M, -k), m_hi = std::min(M, d - 1 - k);
        for (int m = m_lo; m <= m_hi; ++m) {
            const cd bm = b[k + m];
            if (bm == cd{}) continue;
            const int n_lo = std::max({-M, -k, -k - m});
            const int n_hi = std::min({M, d - 1 - k, d - 1 - k - m});
            const cd* row = crow.data() + (m + M) * W + M;
            cd s{};
            for (int n = n_lo; n <= n_hi; ++n) s += row[n] * a[k + n] * cc[k + m + n];
            acc += bm * s;
        }
        out[k] += acc;
    }
}

}  // namespace

std::vector<CVector> deterministic_orders(const CouplingTensor& t, const CVector& x, int N_o_max,
                                          int limit) {
    if (N_o_max < 0) throw ValidationError("N_o_max", "order must be non-negative");
    if (N_o_max > limit)
        throw ValidationError("N_o_max", "order " + std::to_string(N_o_max) +
                                             " exceeds the configured limit " + std::to_string(limit));
    if (t.M < 0 || t.C.rows() != t.width()) throw DimensionError("deterministic_orders: malformed tensor");
    const int M = t.M, W = t.width();
    std::vector<cd> crow(static_cast<std::size_t>(W) * W);
    for (int i = 0; i < W; ++i)
        for (int j = 0; j < W; ++j) crow[i * W + j] = t.C(i, j);

    std::vector<CVector> y;
    y.push_back(x);
    for (int N = 1; N <= N_o_max; ++N) {
        CVector out(x.size(), cd{});
        for (int i = 0; i <= N - 1; ++i)
            for (int j = 0; i + j <= N - 1; ++j) {
                const int l = N - 1 - i - j;
                accumulate_triple(crow, M, y[i], y[j], y[l], out);
            }
        y.push_back(std::move(out));
    }
    return y;
}

CVector combine_orders(const std::vector<CVector>& orders, double eps, int upto) {
    if (orders.empty()) throw ValidationError("orders", "empty order list");
    if (upto < 0 || upto >= static_cast<int>(orders.size()))
        throw ValidationError("order", "requested order was not computed");
    CVector out = orders[0];
    double w = 1.0;
    for (int N = 1; N <= upto; ++N) {
        w *= eps;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * orders[N][k];
    }
    return out;
}

CVector distort(const CouplingTensor& t, const SystemConfig& cfg, const SymbolBlock& block,
                int order) {
    if (!(block.power > 0.0)) throw DomainError("distort: block power must be positive");
    const double s = 1.0 / std::sqrt(block.power);
    CVector u(block.size());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = block.symbols[k] * s;
    const auto orders = deterministic_orders(t, u, order);
    return combine_orders(orders, cfg.epsilon(block.power), order);
}

double stationary_phase(const SystemConfig& cfg, const CouplingTensor& t, double S, PhaseRule rule) {
    if (!(S >= 0.0)) throw DomainError("stationary_phase: S must be non-negative");
    double sum = 0.0;
    for (int m = -t.M; m <= t.M; ++m)
        sum += rule == PhaseRule::squared_norm ? std::norm(t.c(m, 0)) : t.c(m, 0).imag();
    return 2.0 * S * cfg.nonlinear_scale() * sum;
}

NoiseMixing noise_mixing(const CouplingTensor& t, const CVector& xt, double rho, double eps) {
    if (t.K.rows() != t.width() || t.K.cols() != t.width())
        throw DimensionError("noise_mixing: malformed tensor");
    const int d = static_cast<int>(xt.size());
    const int M = t.M;
    NoiseMixing mix;
    mix.rho = rho;
    mix.eps = eps;
    mix.memory = M;
    mix.M = Eigen::MatrixXcd::Zero(d, d);
    mix.L = Eigen::MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) mix.M(k, k) = rho;
    if (eps == 0.0 || rho == 0.0) return mix;

    auto inside = [d](int i) { return i >= 0 && i < d; };
    const double s = rho * eps;
    for (int k = 0; k < d; ++k) {
        for (int m = std::max(0, k - M); m <= std::min(d - 1, k + M); ++m) {
            cd acc{};
            for (int n = -M; n <= M; ++n) {
                if (!inside(k + n) || !inside(m + n)) continue;
                const cd a = xt[k + n], b = xt[m + n];
                acc += t.k(n, m - k) * (a * std::conj(b) + b * std::conj(a));
            }
            mix.M(k, m) += s * acc;
        }
        for (int m = std::max(0, k - 2 * M); m <= std::min(d - 1, k + 2 * M); ++m) {
            cd acc{};
            for (int n = -M; n <= M; ++n) {
                const int j = m - k - n;
                if (j < -M || j > M || !inside(k + n) || !inside(m - n)) continue;
                acc += t.k(n, j) * xt[k + n] * xt[m - n];
            }
            mix.L(k, m) = s * acc;
        }
    }
    return mix;
}

NoiseMixing noise_mixing(const CouplingTensor& t, const SystemConfig& cfg, const CVector& xt,
                         double P) {
    if (!(P > 0.0)) throw DomainError("noise_mixing: P must be positive");
    return noise_mixing(t, xt, cfg.rho(P), cfg.epsilon(P));
}

CVector forward_sample(const CVector& xt, const NoiseMixing& mix, std::uint64_t seed) {
    const auto d = static_cast<Eigen::Index>(xt.size());
    if (mix.M.rows() != d || mix.M.cols() != d || mix.L.rows() != d || mix.L.cols() != d)
        throw DimensionError("forward_sample: mixing matrices do not match the block");
    Engine eng = make_engine(seed, 0x7E7A);
    Eigen::VectorXcd z(d);
    for (Eigen::Index i = 0; i < d; ++i) z(i) = complex_normal(eng, 1.0);
    const Eigen::VectorXcd w = mix.M * z + mix.L * z.conjugate();
    CVector y(xt);
    for (Eigen::Index i = 0; i < d; ++i) y[i] += w(i);
    return y;
}

Dataset model_ensemble(const SystemConfig& cfg, const CouplingTensor& t, const Constellation& c,
                       std::size_t n_blocks, std::size_t d, std::uint64_t seed,
                       const ModelOptions& opt) {
    if (n_blocks < 1) throw ValidationError("blocks", "need at least one block");
    const double ref = c.power() > 0.0 ? c.power() : 1.0;
    const double inv_root = 1.0 / std::sqrt(ref);
    const double eps = cfg.epsilon(c.power());

    Dataset ds;
    ds.n_blocks = n_blocks;
    ds.d = d;
    ds.power = c.power();
    ds.seed = seed;
    ds.fingerprint = cfg.fingerprint();
    ds.source = "model-order" + std::to_string(opt.order) + (opt.with_noise ? "-noisy" : "");
    ds.x.resize(n_blocks * d);
    ds.y.resize(n_blocks * d);

    parallel_for(n_blocks, opt.threads, [&](std::size_t b) {
        const SymbolBlock blk = sample_block(c, d, derive_seed(seed, 2 * b));
        CVector u(d);
        for (std::size_t k = 0; k < d; ++k) u[k] = blk.symbols[k] * inv_root;
        CVector y = combine_orders(deterministic_orders(t, u, opt.order), eps, opt.order);
        if (opt.with_noise) {
            const auto mix = noise_mixing(t, y, cfg.rho(ref), eps);
            y = forward_sample(y, mix, derive_seed(seed, 2 * b + 1));
        }
        for (std::size_t k = 0; k < d; ++k) {
            ds.x[b * d + k] = u[k];
            ds.y[b * d + k] = y[k];
        }
    });
    return ds;
}

}  // namespace fibercap
