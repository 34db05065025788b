#include "fibercap/ssfm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "fibercap/error.hpp"
#include "fibercap/parallel.hpp"
#include "fibercap/pulse.hpp"
#include "fibercap/rng.hpp"

namespace fibercap {

namespace {

using cd = std::complex<double>;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place FFT workspace. FFTW's planner is not re-entrant, execution is.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        buf_ = fftw_alloc_complex(n);
        if (!buf_) throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        const int ni = static_cast<int>(n);
        fwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(ni, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    cd* data() { return reinterpret_cast<cd*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    // Unnormalized; callers fold 1/n into their spectral multiplier.
    void backward() { fftw_execute(bwd_); }

private:
    std::size_t n_;
    fftw_complex* buf_ = nullptr;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// omega^2 per FFT bin. The sign of omega does not matter for even operators.
std::vector<double> omega_squared(const TimeGrid& g) {
    std::vector<double> w2(g.n);
    const double dw = 2.0 * std::numbers::pi / g.duration();
    for (std::size_t j = 0; j < g.n; ++j) {
        const double idx = j < (g.n + 1) / 2 ? double(j) : double(j) - double(g.n);
        w2[j] = (idx * dw) * (idx * dw);
    }
    return w2;
}

double edge_fraction_spectrum(const cd* spec, const TimeGrid& g, double band) {
    const double limit = band * static_cast<double>(g.n / 2);
    double hi = 0.0, tot = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        const double idx = j < (g.n + 1) / 2 ? double(j) : double(g.n) - double(j);
        const double e = std::norm(spec[j]);
        tot += e;
        if (idx > limit) hi += e;
    }
    return tot > 0.0 ? hi / tot : 0.0;
}

std::size_t next_pow2(std::size_t x) {
    std::size_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

void check_grid(const SystemConfig& cfg, const TimeGrid& g, std::size_t size) {
    if (g.n == 0 || g.dt <= 0.0) throw ValidationError("grid", "empty time grid");
    if (size != g.n) throw DimensionError("field: sample count does not match its grid");
    if (g.sps < 8) throw ValidationError("grid.samples_per_symbol", "need at least 8 samples per symbol");
    const double need = dispersive_spread(cfg);
    if (g.guard_before() < need || g.guard_after() < need)
        throw ValidationError("grid", "guard interval shorter than the dispersive spread");
}

}  // namespace

double dispersive_spread(const SystemConfig& cfg) {
    return 2.0 * std::numbers::pi * std::abs(cfg.beta2) * cfg.link_length() * cfg.bandwidth;
}

TimeGrid make_grid(const SystemConfig& cfg, std::size_t d, const GridOptions& opt) {
    if (d < 1) throw ValidationError("d", "block length must be at least 1");
    if (opt.samples_per_symbol < 8)
        throw ValidationError("grid.samples_per_symbol", "need at least 8 samples per symbol");
    TimeGrid g;
    g.d = d;
    g.sps = opt.samples_per_symbol;
    g.dt = cfg.symbol_period / g.sps;
    const double guard = dispersive_spread(cfg) + opt.guard_margin_t0 * cfg.pulse.t0;
    const auto guard_samples = static_cast<std::size_t>(std::ceil(guard / g.dt));
    const std::size_t body = (d - 1) * g.sps + 1;
    g.n = next_pow2(body + 2 * guard_samples);
    g.offset = (g.n - body) / 2;
    return g;
}

double Field::energy() const {
    double e = 0.0;
    for (const auto& s : samples) e += std::norm(s);
    return e * grid.dt;
}

Field launch(const SystemConfig& cfg, const TimeGrid& grid, const SymbolBlock& block) {
    if (block.size() != grid.d) throw DimensionError("launch: block length does not match grid");
    Field f{grid, std::vector<cd>(grid.n, cd{})};
    const double root_t = std::sqrt(cfg.symbol_period);
    const auto half = static_cast<long>(std::ceil(14.0 * cfg.pulse.t0 / grid.dt));
    std::vector<double> taps(2 * half + 1);
    for (long j = -half; j <= half; ++j) taps[j + half] = root_t * pulse_time(cfg.pulse, j * grid.dt);
    const long n = static_cast<long>(grid.n);
    for (std::size_t k = 0; k < grid.d; ++k) {
        const long c = static_cast<long>(grid.offset + k * grid.sps);
        for (long j = -half; j <= half; ++j) {
            const long idx = ((c + j) % n + n) % n;
            f.samples[idx] += block.symbols[k] * taps[j + half];
        }
    }
    return f;
}

double band_edge_fraction(const Field& f, double band) {
    Fft fft(f.grid.n);
    std::copy(f.samples.begin(), f.samples.end(), fft.data());
    fft.forward();
    return edge_fraction_spectrum(fft.data(), f.grid, band);
}

Field propagate(const SystemConfig& cfg, Field in, std::uint64_t seed, const StepOptions& opt,
                PropagationStats* stats) {
    const TimeGrid& g = in.grid;
    check_grid(cfg, g, in.samples.size());
    if (!(opt.max_phase > 0.0) || !(opt.max_step > 0.0))
        throw ValidationError("step", "max_phase and max_step must be positive");

    Fft fft(g.n);
    cd* e = fft.data();
    std::copy(in.samples.begin(), in.samples.end(), e);

    fft.forward();
    if (edge_fraction_spectrum(e, g, opt.alias_band) > opt.alias_tol)
        throw NumericalError("propagate: input spectrum reaches the band edge; refine the grid");
    fft.backward();
    const double inv_n = 1.0 / static_cast<double>(g.n);
    for (std::size_t j = 0; j < g.n; ++j) e[j] *= inv_n;

    const auto w2 = omega_squared(g);
    std::vector<cd> kernel(g.n);
    double kernel_len = -1.0;
    // exp((-alpha/2 + i beta2 w^2 / 2) z) / n
    auto linear = [&](double z) {
        if (z != kernel_len) {
            const double amp = std::exp(-0.5 * cfg.alpha * z) * inv_n;
            for (std::size_t j = 0; j < g.n; ++j) kernel[j] = std::polar(amp, 0.5 * cfg.beta2 * w2[j] * z);
            kernel_len = z;
        }
        fft.forward();
        for (std::size_t j = 0; j < g.n; ++j) e[j] *= kernel[j];
        fft.backward();
    };
    double peak = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) peak = std::max(peak, std::norm(e[j]));
    // returns the peak power after rotation (unchanged by a pure phase)
    auto nonlinear = [&](double h) {
        const double gh = cfg.gamma * h;
        double pk = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) {
            const double p = std::norm(e[j]);
            pk = std::max(pk, p);
            e[j] *= std::polar(1.0, gh * p);
        }
        return pk;
    };
    auto choose = [&](double pk, double remaining) {
        double h = opt.max_step;
        if (cfg.gamma > 0.0 && pk > 0.0) h = std::min(h, opt.max_phase / (cfg.gamma * pk));
        // avoid a sliver at the end of the span
        if (h >= remaining || remaining - h < 1e-3 * h) h = remaining;
        return h;
    };

    PropagationStats st;
    st.min_step = std::numeric_limits<double>::infinity();
    const double gain = std::exp(0.5 * cfg.alpha * cfg.span_length);  // field gain
    const double ase_var = cfg.noise_power() * cfg.symbol_period / (g.dt * cfg.n_spans);
    Engine eng = make_engine(seed, 0xA5E);
    // ASE is white inside the alias band and zero above it, so the edge check
    // keeps measuring signal broadening only
    std::unique_ptr<Fft> noise_fft;
    const double limit = opt.alias_band * static_cast<double>(g.n / 2);
    auto add_ase = [&](Engine& r) {
        if (!noise_fft) noise_fft = std::make_unique<Fft>(g.n);
        cd* w = noise_fft->data();
        // unit-variance spectrum lines give per-sample variance ase_var in the band
        const double a = std::sqrt(ase_var * static_cast<double>(g.n)) / gain;
        for (std::size_t j = 0; j < g.n; ++j) {
            const double idx = j < (g.n + 1) / 2 ? double(j) : double(g.n) - double(j);
            const cd v = complex_normal(r, 1.0);
            w[j] = idx > limit ? cd{} : a * v;
        }
        noise_fft->backward();
        for (std::size_t j = 0; j < g.n; ++j) e[j] += w[j] * inv_n;
    };

    for (int span = 0; span < cfg.n_spans; ++span) {
        const double ls = cfg.span_length;
        double z = 0.0;
        double h = choose(peak, ls);
        linear(0.5 * h);
        for (;;) {
            // dispersion can raise the peak during the half step; if so, back up and shorten
            for (int retry = 0; cfg.gamma > 0.0 && retry < 8; ++retry) {
                double now = 0.0;
                for (std::size_t j = 0; j < g.n; ++j) now = std::max(now, std::norm(e[j]));
                if (cfg.gamma * now * h <= opt.max_phase) break;
                const double shorter = 0.999 * opt.max_phase / (cfg.gamma * now);
                linear(0.5 * (shorter - h));
                h = shorter;
                ++st.rejected;
            }
            const double pk = (cfg.gamma > 0.0) ? nonlinear(h) : peak;
            st.peak_phase = std::max(st.peak_phase, cfg.gamma * pk * h);
            st.min_step = std::min(st.min_step, h);
            st.max_step = std::max(st.max_step, h);
            ++st.steps;
            z += h;
            if (ls - z <= 0.0) {
                linear(0.5 * h);
                break;
            }
            // loss over the coming step lowers the peak further; pk is conservative
            const double hn = choose(pk, ls - z);
            linear(0.5 * (h + hn));
            h = hn;
        }

        if (opt.alias_tol < 1.0) {
            fft.forward();
            const double frac = edge_fraction_spectrum(e, g, opt.alias_band);
            fft.backward();
            for (std::size_t j = 0; j < g.n; ++j) e[j] *= inv_n;
            if (frac > opt.alias_tol)
                throw NumericalError("propagate: spectral broadening reached the band edge in span " +
                                     std::to_string(span + 1));
        }
        if (ase_var > 0.0) add_ase(eng);
        peak = 0.0;
        for (std::size_t j = 0; j < g.n; ++j) {
            e[j] *= gain;
            peak = std::max(peak, std::norm(e[j]));
        }
    }

    std::copy(e, e + g.n, in.samples.begin());
    if (st.steps == 0) st.min_step = 0.0;
    if (stats) *stats = st;
    return in;
}

void compensate_dispersion(const SystemConfig& cfg, Field& f, double z) {
    Fft fft(f.grid.n);
    cd* e = fft.data();
    std::copy(f.samples.begin(), f.samples.end(), e);
    const auto w2 = omega_squared(f.grid);
    const double inv_n = 1.0 / static_cast<double>(f.grid.n);
    fft.forward();
    for (std::size_t j = 0; j < f.grid.n; ++j) e[j] *= std::polar(inv_n, -0.5 * cfg.beta2 * w2[j] * z);
    fft.backward();
    std::copy(e, e + f.grid.n, f.samples.begin());
}

SymbolBlock receive(const SystemConfig& cfg, const Field& f, std::size_t d, double power) {
    const TimeGrid& g = f.grid;
    if (f.samples.size() != g.n) throw DimensionError("receive: sample count does not match grid");
    if (d != g.d) throw DimensionError("receive: block length does not match grid");
    if (!(power > 0.0)) throw DomainError("receive: reference power must be positive");

    Field c = f;
    compensate_dispersion(cfg, c, cfg.link_length());

    const auto half = static_cast<long>(std::ceil(14.0 * cfg.pulse.t0 / g.dt));
    std::vector<double> taps(2 * half + 1);
    const double scale = g.dt / std::sqrt(cfg.symbol_period * power);
    for (long j = -half; j <= half; ++j) taps[j + half] = scale * pulse_time(cfg.pulse, j * g.dt);

    SymbolBlock out;
    out.power = power;
    out.symbols.resize(d);
    const long n = static_cast<long>(g.n);
    for (std::size_t k = 0; k < d; ++k) {
        const long ctr = static_cast<long>(g.offset + k * g.sps);
        cd acc{};
        for (long j = -half; j <= half; ++j) acc += c.samples[((ctr + j) % n + n) % n] * taps[j + half];
        out.symbols[k] = acc;
    }
    return out;
}

Dataset run_ensemble(const SystemConfig& cfg, const Constellation& c, std::size_t n_blocks,
                     std::size_t d, std::uint64_t seed, const EnsembleOptions& opt) {
    if (n_blocks < 1) throw ValidationError("blocks", "need at least one block");
    const TimeGrid grid = make_grid(cfg, d, opt.grid);
    // zero-power runs are reported against a 1 W reference
    const double ref = c.power() > 0.0 ? c.power() : 1.0;
    const double inv_root = 1.0 / std::sqrt(ref);

    Dataset ds;
    ds.n_blocks = n_blocks;
    ds.d = d;
    ds.power = c.power();
    ds.seed = seed;
    ds.fingerprint = cfg.fingerprint();
    ds.source = "ssfm";
    ds.x.resize(n_blocks * d);
    ds.y.resize(n_blocks * d);

    parallel_for(n_blocks, opt.threads, [&](std::size_t b) {
        const SymbolBlock blk = sample_block(c, d, derive_seed(seed, 2 * b));
        Field f = launch(cfg, grid, blk);
        f = propagate(cfg, std::move(f), derive_seed(seed, 2 * b + 1), opt.step);
        const SymbolBlock y = receive(cfg, f, d, ref);
        for (std::size_t k = 0; k < d; ++k) {
            ds.x[b * d + k] = blk.symbols[k] * inv_root;
            ds.y[b * d + k] = y.symbols[k];
        }
    });
    return ds;
}

}  // namespace fibercap
