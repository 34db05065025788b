#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fibercap/config.hpp"
#include "fibercap/coupling.hpp"
#include "fibercap/ssfm.hpp"

namespace fibercap {

struct ValidationOptions {
    std::vector<double> powers_dbm;
    std::size_t blocks = 64;
    std::size_t d = 1024;
    std::uint64_t seed = 1;
    int max_order = 2;  // model orders 1..max_order are compared; 0 is the linear model
    EnsembleOptions ensemble;
};

struct NmseRow {
    double power_dbm = 0.0;
    int order = 0;
    double nmse_db = 0.0;
};

struct ValidationReport {
    std::vector<NmseRow> rows;
    std::string fingerprint;
    std::uint64_t seed = 0;
    int memory = 0;
    double seconds_ssfm = 0.0;

    double nmse_db(double power_dbm, int order) const;
    /// Least-squares slope of NMSE (dB) against launch power (dB) for one order.
    double slope(int order) const;
};

/// Gaussian-input SSFM ensembles at each power, compared block by block with
/// the perturbative model fed the same symbols.
ValidationReport validate_model(const SystemConfig& cfg, const CouplingTensor& t,
                                const ValidationOptions& opt);

/// power_dBm,order,nmse_dB rows after '#' fingerprint/seed lines.
void write_validation_csv(std::ostream& os, const ValidationReport& r);

/// Slope of y against x by least squares.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fibercap
