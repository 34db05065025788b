#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fibercap/config.hpp"
#include "fibercap/constellation.hpp"
#include "fibercap/dataset.hpp"

namespace fibercap {

struct GridOptions {
    int samples_per_symbol = 8;
    /// Extra guard beyond the dispersive spread, in units of T0.
    double guard_margin_t0 = 8.0;
};

/// Periodic sampling grid holding a block of d symbols between two guards.
/// Symbol k sits at sample offset + k * sps.
struct TimeGrid {
    std::size_t n = 0;
    double dt = 0.0;
    std::size_t offset = 0;
    std::size_t d = 0;
    int sps = 0;

    double duration() const { return dt * static_cast<double>(n); }
    double guard_before() const { return dt * static_cast<double>(offset); }
    double guard_after() const {
        return dt * static_cast<double>(n - offset - (d ? (d - 1) * sps : 0));
    }
};

/// 2 pi |beta2| L B: time spread of the signal band over the link.
double dispersive_spread(const SystemConfig& cfg);

/// Smallest power-of-two grid that fits d symbols plus both guards.
TimeGrid make_grid(const SystemConfig& cfg, std::size_t d, const GridOptions& opt = {});

struct Field {
    TimeGrid grid;
    std::vector<std::complex<double>> samples;  // sqrt(W)

    double energy() const;  // J
};

/// E(t) = sum_k X_k sqrt(T) f(t - kT).
Field launch(const SystemConfig& cfg, const TimeGrid& grid, const SymbolBlock& block);

struct StepOptions {
    double max_phase = 1e-3;    // rad, peak nonlinear phase per step
    double max_step = 1000.0;   // m
    double alias_tol = 1e-6;    // allowed spectral energy fraction above alias_band
    double alias_band = 0.9;    // fraction of the Nyquist frequency
};

struct PropagationStats {
    std::size_t steps = 0;
    double peak_phase = 0.0;  // largest nonlinear phase actually applied in one step
    std::size_t rejected = 0;  // steps shortened after the half step raised the peak
    double min_step = 0.0;
    double max_step = 0.0;
};

/// Fraction of spectral energy above `band` * Nyquist.
double band_edge_fraction(const Field& f, double band);

/// Symmetric split-step integration over all spans with lumped gain e^{alpha L_s}
/// and circular ASE after every amplifier (white below alias_band * Nyquist, zero
/// above). Throws ValidationError when the
/// guards are shorter than the dispersive spread and NumericalError when the
/// signal violates the aliasing budget.
Field propagate(const SystemConfig& cfg, Field in, std::uint64_t seed, const StepOptions& opt = {},
                PropagationStats* stats = nullptr);

/// Multiplies the spectrum by exp(-i beta2 omega^2 z / 2), undoing z metres of dispersion.
void compensate_dispersion(const SystemConfig& cfg, Field& f, double z);

/// Dispersion compensation over the whole link, matched filter, sampling at kT,
/// scaling by P^{-1/2}.
SymbolBlock receive(const SystemConfig& cfg, const Field& f, std::size_t d, double power);

struct EnsembleOptions {
    GridOptions grid;
    StepOptions step;
    unsigned threads = 1;
};

/// n_blocks independent launches of d symbols. Block b draws its symbols and its
/// noise from streams derived from (seed, b).
Dataset run_ensemble(const SystemConfig& cfg, const Constellation& c, std::size_t n_blocks,
                     std::size_t d, std::uint64_t seed, const EnsembleOptions& opt = {});

}  // namespace fibercap
