#include "fibercap/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fibercap/constellation.hpp"
#include "fibercap/dataset.hpp"
#include "fibercap/error.hpp"
#include "fibercap/parallel.hpp"
#include "fibercap/perturbative.hpp"

namespace fibercap {

double ValidationReport::nmse_db(double power_dbm, int order) const {
    for (const auto& r : rows)
        if (r.order == order && std::abs(r.power_dbm - power_dbm) < 1e-9) return r.nmse_db;
    throw ValidationError("power_dbm", "no row for this power and order");
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DimensionError("fit_slope: need two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den == 0.0) throw DomainError("fit_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

double ValidationReport::slope(int order) const {
    std::vector<double> x, y;
    for (const auto& r : rows)
        if (r.order == order) {
            x.push_back(r.power_dbm);
            y.push_back(r.nmse_db);
        }
    return fit_slope(x, y);
}

ValidationReport validate_model(const SystemConfig& cfg, const CouplingTensor& t,
                                const ValidationOptions& opt) {
    if (opt.powers_dbm.empty()) throw ValidationError("powers", "empty power sweep");
    if (opt.max_order < 1) throw ValidationError("max_order", "need at least first order");
    ValidationReport rep;
    rep.fingerprint = cfg.fingerprint();
    rep.seed = opt.seed;
    rep.memory = t.M;

    // The normalized symbols depend only on the seed, so the model orders are
    // computed once and reused while the blocks agree.
    std::vector<std::vector<CVector>> orders;
    std::vector<CVector> cached_u;

    for (double dbm : opt.powers_dbm) {
        const double P = dbm_to_watt(dbm);
        const auto t0 = std::chrono::steady_clock::now();
        const Dataset ds =
            run_ensemble(cfg, Constellation::gaussian_iid(P), opt.blocks, opt.d, opt.seed, opt.ensemble);
        rep.seconds_ssfm += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const std::size_t d = opt.d;
        bool reuse = !orders.empty();
        for (std::size_t b = 0; reuse && b < opt.blocks; ++b)
            for (std::size_t k = 0; k < d; ++k)
                if (std::abs(ds.x_at(b, k) - cached_u[b][k]) > 1e-12 * (1.0 + std::abs(cached_u[b][k]))) {
                    reuse = false;
                    break;
                }
        if (!reuse) {
            orders.assign(opt.blocks, {});
            cached_u.assign(opt.blocks, CVector(d));
            parallel_for(opt.blocks, opt.ensemble.threads, [&](std::size_t b) {
                for (std::size_t k = 0; k < d; ++k) cached_u[b][k] = ds.x_at(b, k);
                orders[b] = deterministic_orders(t, cached_u[b], opt.max_order);
            });
        }

        const double eps = cfg.epsilon(P);
        for (int order = 0; order <= opt.max_order; ++order) {
            CVector pred(opt.blocks * d);
            for (std::size_t b = 0; b < opt.blocks; ++b) {
                const CVector y = combine_orders(orders[b], eps, order);
                std::copy(y.begin(), y.end(), pred.begin() + b * d);
            }
            rep.rows.push_back({dbm, order, 10.0 * std::log10(nmse(ds.y, pred))});
        }
    }
    return rep;
}

void write_validation_csv(std::ostream& os, const ValidationReport& r) {
    char buf[128];
    os << "# fingerprint " << r.fingerprint << '\n';
    os << "# seed " << r.seed << '\n';
    os << "# memory " << r.memory << '\n';
    os << "power_dBm,order,nmse_dB\n";
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%.6f,%d,%.9f\n", row.power_dbm, row.order, row.nmse_db);
        os << buf;
    }
}

}  // namespace fibercap
