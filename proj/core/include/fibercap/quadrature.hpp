#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace fibercap::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <class F>
    auto integrate(F&& f) const {
        decltype(f(0.0)) s{};
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// Gauss-Legendre rule on [-1, 1].
inline Rule gauss_legendre(int n) {
    Rule r;
    r.nodes.assign(n, 0.0);
    r.weights.assign(n, 0.0);
    auto legendre = [n](double x, double& p, double& dp) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        p = (n == 0) ? 1.0 : p1;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
    };
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre(x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

/// The `base` rule mapped onto every panel [b[i], b[i+1]].
inline Rule composite(std::span<const double> breakpoints, const Rule& base) {
    Rule out;
    if (breakpoints.size() < 2) return out;
    const std::size_t np = breakpoints.size() - 1;
    out.nodes.reserve(np * base.nodes.size());
    out.weights.reserve(np * base.nodes.size());
    for (std::size_t p = 0; p < np; ++p) {
        const double h = 0.5 * (breakpoints[p + 1] - breakpoints[p]);
        const double c = 0.5 * (breakpoints[p + 1] + breakpoints[p]);
        for (std::size_t i = 0; i < base.nodes.size(); ++i) {
            out.nodes.push_back(c + h * base.nodes[i]);
            out.weights.push_back(h * base.weights[i]);
        }
    }
    return out;
}

inline Rule composite_uniform(double a, double b, int panels, int order) {
    std::vector<double> bp(panels + 1);
    for (int i = 0; i <= panels; ++i) bp[i] = a + (b - a) * i / panels;
    return composite(bp, gauss_legendre(order));
}

namespace detail {
template <class F>
double adaptive_panel(F& f, const Rule& lo_rule, const Rule& hi_rule, double a, double b,
                      double tol, int depth) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    auto on = [&](const Rule& r) {
        double s = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
        return s * h;
    };
    const double coarse = on(lo_rule);
    const double fine = on(hi_rule);
    const double err = std::abs(fine - coarse);
    if (err <= tol || err <= 1e-14 * std::abs(fine) || depth <= 0) return fine;
    return adaptive_panel(f, lo_rule, hi_rule, a, c, 0.5 * tol, depth - 1) +
           adaptive_panel(f, lo_rule, hi_rule, c, b, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive bisection with a 10/21-point Gauss-Legendre error estimate.
template <class F>
double adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 30) {
    static const Rule lo = gauss_legendre(10);
    static const Rule hi = gauss_legendre(21);
    return detail::adaptive_panel(f, lo, hi, a, b, abs_tol, max_depth);
}

}  // namespace fibercap::quad
