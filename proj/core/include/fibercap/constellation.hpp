#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fibercap/ripple.hpp"

namespace fibercap {

using cd = std::complex<double>;

enum class ConstellationKind { qam64, gaussian_iid, ripple };

ConstellationKind parse_constellation_kind(const std::string& name);
std::string to_string(ConstellationKind k);

/// Transmit alphabet or input law with target average power S (W).
class Constellation {
public:
    static Constellation qam64(double power);
    static Constellation gaussian_iid(double power);
    static Constellation ripple(RippleDistribution dist);

    ConstellationKind kind() const { return kind_; }
    double power() const { return power_; }
    /// Discrete points (qam64 only), already scaled to power().
    const std::vector<cd>& points() const { return points_; }
    const RippleDistribution& ripple_distribution() const { return *ripple_; }

    /// The same law rescaled to a new average power.
    Constellation with_power(double power) const;

private:
    ConstellationKind kind_ = ConstellationKind::gaussian_iid;
    double power_ = 0.0;
    std::vector<cd> points_;
    std::optional<RippleDistribution> ripple_;
};

/// A finite symbol sequence, amplitudes in sqrt(W).
struct SymbolBlock {
    std::vector<cd> symbols;
    double power = 0.0;  // nominal average power S of the generating law

    std::size_t size() const { return symbols.size(); }
    double mean_power() const;
};

/// d i.i.d. draws; bit-identical for identical (constellation, d, seed).
SymbolBlock sample_block(const Constellation& c, std::size_t d, std::uint64_t seed);

}  // namespace fibercap
