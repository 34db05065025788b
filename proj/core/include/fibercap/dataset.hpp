#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fibercap {

/// Paired transmit/receive symbols for an ensemble of blocks. Both columns are
/// normalized by sqrt(P), so a noiseless linear link gives y == x.
struct Dataset {
    std::size_t n_blocks = 0;
    std::size_t d = 0;
    double power = 0.0;  // W
    std::uint64_t seed = 0;
    std::string fingerprint;
    std::string source;  // "ssfm", "model-order1", ...
    std::vector<std::complex<double>> x, y;  // block-major, size n_blocks * d

    std::complex<double> x_at(std::size_t b, std::size_t k) const { return x[b * d + k]; }
    std::complex<double> y_at(std::size_t b, std::size_t k) const { return y[b * d + k]; }
};

/// sum |y - ref|^2 / sum |ref|^2 where ref is the dataset's own x unless given.
double nmse(const std::vector<std::complex<double>>& y, const std::vector<std::complex<double>>& ref);

/// CSV with '#' metadata lines, then block,k,reX,imX,reY,imY.
void write_dataset_csv(std::ostream& os, const Dataset& ds);
Dataset read_dataset_csv(std::istream& is);

}  // namespace fibercap
