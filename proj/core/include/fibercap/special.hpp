#pragma once

#include <cmath>
#include <numbers>

namespace fibercap {

/// e^{-x} I0(x) for x >= 0, accurate to ~1e-14 relative without overflow.
inline double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x <= 30.0) {
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-x);
    }
    // Hankel asymptotic expansion; terms (2k-1)!!^2 / (k! 8^k x^k).
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next > term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// log I0(x).
inline double log_bessel_i0(double x) {
    x = std::abs(x);
    return x + std::log(bessel_i0_scaled(x));
}

}  // namespace fibercap
