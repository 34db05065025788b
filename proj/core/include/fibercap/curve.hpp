#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fibercap/bounds.hpp"
#include "fibercap/mutual_info.hpp"
#include "fibercap/optimize.hpp"

namespace fibercap {

/// Bound names accepted by capacity_curve: i0, i1, i1_envelope, i2, ss, gn, awgn.
std::vector<std::string> parse_bound_list(const std::string& csv);

struct CurveOptions {
    std::vector<double> powers_dbm;
    std::vector<std::string> bounds{"ss", "gn", "i0", "i1", "i2"};
    std::vector<std::size_t> levels{2, 3};  // q values tried for i2
    Surrogate surrogate = Surrogate::level_spread;
    OptimizeOptions optimize;
    std::uint64_t seed = 1;
    /// Coefficient sum behind the gn rows; required when "gn" is requested.
    std::optional<double> averaged_sum;
};

struct RippleDump {
    double power_dbm = 0.0;
    double S = 0.0;
    std::size_t q = 0;
    RippleDistribution dist;
    MIResult mi;
    int evaluations = 0;
    bool budget_exhausted = false;
    std::string best_start;
};

/// Evaluates the requested bounds over the power grid. Points where a bound is
/// undefined (i1 below S1 or beyond its root domain) become rows with NaN bits
/// and a note. i2 rows are labelled i2_q<q>; each optimization starts from the
/// optimum found at the previous power in addition to the built-in starts.
CapacityCurve capacity_curve(const SystemConfig& cfg, const CouplingTensor& t,
                             const CurveOptions& opt, std::vector<RippleDump>* dumps = nullptr);

/// power_dBm,bound,bits_per_symbol,stderr,note after '#' metadata lines.
void write_curve_csv(std::ostream& os, const CapacityCurve& c, const std::string& surrogate);

}  // namespace fibercap
