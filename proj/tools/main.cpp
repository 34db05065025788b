#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config_io.hpp"
#include "fibercap/bounds.hpp"
#include "fibercap/constellation.hpp"
#include "fibercap/coupling.hpp"
#include "fibercap/curve.hpp"
#include "fibercap/dataset.hpp"
#include "fibercap/error.hpp"
#include "fibercap/perturbative.hpp"
#include "fibercap/ssfm.hpp"
#include "fibercap/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fibercap;
using namespace fibercap::cli;

namespace {

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ValidationError("out", "cannot write '" + p.string() + "'");
    return os;
}

std::vector<double> parse_list(const std::string& s, const char* field) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError(field, "not a number: '" + item + "'");
        }
    }
    if (v.empty()) throw ValidationError(field, "empty list");
    return v;
}

struct TensorChoice {
    CouplingTensor tensor;
    std::optional<MemorySelection> selection;
};

TensorChoice build_tensor(const SystemConfig& cfg, const RunConfig& rc) {
    TensorOptions to;
    to.threads = rc.threads;
    TensorChoice out;
    if (rc.coupling.window > 0) {
        out.tensor = integrate_tensor(cfg, rc.coupling.window, rc.coupling.xi_nodes, to);
        return out;
    }
    const CouplingTensor full = integrate_tensor(cfg, rc.coupling.max_window, rc.coupling.xi_nodes, to);
    out.selection = select_memory(full, rc.coupling.tail_tol);
    out.tensor = full.truncated(out.selection->M);
    return out;
}

json meta(const SystemConfig& cfg, std::uint64_t seed) {
    return {{"fingerprint", cfg.fingerprint()}, {"seed", seed}};
}

json ripple_json(const RippleDump& r) {
    return {{"q", r.q},
            {"p", r.dist.p},
            {"S_levels", r.dist.S_levels},
            {"rho_levels", r.dist.rho_levels},
            {"S", r.S},
            {"power_dbm", r.power_dbm},
            {"achieved_bits", r.mi.bits},
            {"stderr_bits", r.mi.stderr_bits},
            {"evaluations", r.evaluations},
            {"budget_exhausted", r.budget_exhausted},
            {"best_start", r.best_start}};
}

int cmd_coupling(const RunConfig& rc, const fs::path& out) {
    const SystemConfig cfg = make_config(rc.link);
    const TensorChoice tc = build_tensor(cfg, rc);
    const CouplingTensor& t = tc.tensor;
    fs::create_directories(out);
    {
        auto os = open_out(out / "tensor.txt");
        write_tensor(os, t);
    }
    {
        auto os = open_out(out / "coupling.csv");
        os << "# fingerprint " << t.fingerprint << "\n# seed " << rc.seed << '\n';
        write_tensor_csv(os, t);
    }
    int am = 0, an = 0;
    for (int m = -t.M; m <= t.M; ++m)
        for (int n = -t.M; n <= t.M; ++n)
            if (std::abs(t.c(m, n)) > std::abs(t.c(am, an))) {
                am = m;
                an = n;
            }
    json rep = meta(cfg, rc.seed);
    rep["M"] = t.M;
    rep["ss_sum"] = t.ss_sum();
    rep["sn_sum"] = t.sn_sum();
    rep["max_entry"] = {{"m", am}, {"n", an}, {"abs_C", std::abs(t.c(am, an))}};
    if (tc.selection) {
        const auto& s = *tc.selection;
        rep["tail_tol"] = rc.coupling.tail_tol;
        rep["tail_mass"] = s.tail_mass;
        rep["computed_M"] = s.computed_M;
        rep["decay_fit"] = {{"slope", s.fit.slope}, {"intercept", s.fit.intercept}, {"r_squared", s.fit.r_squared}};
    } else if (t.M >= 3) {
        const DecayFit f = fit_decay(t, 1, t.M);
        rep["decay_fit"] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
    }
    auto os = open_out(out / "decay.json");
    os << rep.dump(2) << '\n';
    std::cout << "M " << t.M << ", max |C| at (" << am << "," << an << "), wrote " << out.string() << '\n';
    return kOk;
}

int cmd_simulate(const RunConfig& rc, const fs::path& out, const std::string& model) {
    const SystemConfig cfg = make_config(rc.link);
    const auto& sm = rc.simulate;
    const double P = dbm_to_watt(sm.power_dbm);
    Constellation c = Constellation::gaussian_iid(P);
    if (parse_constellation_kind(sm.constellation) == ConstellationKind::qam64) c = Constellation::qam64(P);
    else if (parse_constellation_kind(sm.constellation) == ConstellationKind::ripple)
        throw ValidationError("simulate.constellation", "ripple input is set through the library API");

    Dataset ds;
    if (model == "ssfm") {
        EnsembleOptions eo;
        eo.grid.samples_per_symbol = sm.samples_per_symbol;
        eo.step.max_step = sm.max_step_m;
        eo.step.max_phase = sm.max_phase_rad;
        eo.threads = rc.threads;
        ds = run_ensemble(cfg, c, sm.blocks, sm.symbols, rc.seed, eo);
    } else {
        ModelOptions mo;
        if (model == "order1") mo.order = 1;
        else if (model == "order2") mo.order = 2;
        else throw ValidationError("model", "expected ssfm, order1 or order2");
        mo.with_noise = cfg.noise_power() > 0.0;
        mo.threads = rc.threads;
        const TensorChoice tc = build_tensor(cfg, rc);
        ds = model_ensemble(cfg, tc.tensor, c, sm.blocks, sm.symbols, rc.seed, mo);
    }
    auto os = open_out(out);
    write_dataset_csv(os, ds);
    std::cout << ds.source << ": " << ds.n_blocks << " x " << ds.d << " symbols at " << sm.power_dbm
              << " dBm, wrote " << out.string() << '\n';
    return kOk;
}

int cmd_validate(const RunConfig& rc, const fs::path& out) {
    const SystemConfig cfg = make_config(rc.link);
    const TensorChoice tc = build_tensor(cfg, rc);
    ValidationOptions vo;
    vo.powers_dbm = rc.validate.powers_dbm;
    vo.max_order = rc.validate.max_order;
    vo.blocks = rc.simulate.blocks;
    vo.d = rc.simulate.symbols;
    vo.seed = rc.seed;
    vo.ensemble.grid.samples_per_symbol = rc.simulate.samples_per_symbol;
    vo.ensemble.step.max_step = rc.simulate.max_step_m;
    vo.ensemble.step.max_phase = rc.simulate.max_phase_rad;
    vo.ensemble.threads = rc.threads;
    const ValidationReport rep = validate_model(cfg, tc.tensor, vo);
    {
        auto os = open_out(out);
        write_validation_csv(os, rep);
    }
    json j = meta(cfg, rc.seed);
    j["memory"] = rep.memory;
    if (vo.powers_dbm.size() >= 2)
        for (int o = 0; o <= vo.max_order; ++o) j["slope_db_per_db"][std::to_string(o)] = rep.slope(o);
    fs::path rp = out;
    rp.replace_extension(".json");
    auto os = open_out(rp);
    os << j.dump(2) << '\n';
    for (const auto& r : rep.rows)
        std::printf("%8.2f dBm  order %d  NMSE %8.2f dB\n", r.power_dbm, r.order, r.nmse_db);
    return kOk;
}

CurveOptions curve_options(const RunConfig& rc, const SystemConfig& cfg) {
    CurveOptions co;
    co.powers_dbm = rc.capacity.powers_dbm;
    co.bounds = parse_bound_list(rc.capacity.bounds);
    co.levels = rc.capacity.levels;
    co.surrogate = rc.capacity.surrogate;
    co.seed = rc.seed;
    co.optimize.budget = rc.capacity.budget;
    co.optimize.starts = rc.capacity.starts;
    co.optimize.search_samples = rc.capacity.search_samples;
    co.optimize.final_samples = rc.capacity.final_samples;
    co.optimize.threads = rc.threads;
    if (std::find(co.bounds.begin(), co.bounds.end(), "gn") != co.bounds.end())
        co.averaged_sum = averaged_ss_sum(cfg, rc.coupling.xi_nodes);
    return co;
}

int cmd_capacity(const RunConfig& rc, const fs::path& out) {
    const SystemConfig cfg = make_config(rc.link);
    if (rc.capacity.powers_dbm.empty()) throw ValidationError("capacity.powers_dbm", "no powers given");
    const TensorChoice tc = build_tensor(cfg, rc);
    const CurveOptions co = curve_options(rc, cfg);
    std::vector<RippleDump> dumps;
    const CapacityCurve curve = capacity_curve(cfg, tc.tensor, co, &dumps);
    fs::create_directories(out);
    {
        auto os = open_out(out / "curve.csv");
        write_curve_csv(os, curve, to_string(co.surrogate));
    }
    for (std::size_t i = 0; i < dumps.size(); ++i) {
        json j = meta(cfg, rc.seed);
        j["surrogate"] = to_string(co.surrogate);
        j.update(ripple_json(dumps[i]));
        char name[64];
        std::snprintf(name, sizeof name, "ripple_%03zu_q%zu.json", i / co.levels.size(), dumps[i].q);
        auto os = open_out(out / name);
        os << j.dump(2) << '\n';
    }
    for (const auto& p : curve.points)
        if (!p.note.empty() && std::isnan(p.bits))
            std::cerr << "warning: " << p.bound << " skipped at " << p.power_dbm << " dBm (" << p.note << ")\n";
    std::cout << curve.points.size() << " rows, wrote " << out.string() << '\n';
    return kOk;
}

int cmd_shape(const RunConfig& rc, const fs::path& out, double power_dbm, std::size_t q) {
    const SystemConfig cfg = make_config(rc.link);
    const TensorChoice tc = build_tensor(cfg, rc);
    RunConfig one = rc;
    one.capacity.powers_dbm = {power_dbm};
    one.capacity.bounds = "i2";
    one.capacity.levels = {q};
    std::vector<RippleDump> dumps;
    capacity_curve(cfg, tc.tensor, curve_options(one, cfg), &dumps);
    json j = meta(cfg, rc.seed);
    j["surrogate"] = to_string(rc.capacity.surrogate);
    j.update(ripple_json(dumps.front()));
    auto os = open_out(out);
    os << j.dump(2) << '\n';
    std::printf("q=%zu at %.2f dBm: %.6f +- %.6f bits\n", q, power_dbm, dumps.front().mi.bits,
                dumps.front().mi.stderr_bits);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-memory nonlinear fiber channel: coupling, simulation, model validation, capacity bounds"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::optional<int> window;
    std::optional<double> tail_tol;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::size_t> blocks;
    std::string sweep, bounds, powers, model = "ssfm";
    std::optional<double> power;
    std::size_t levels = 3;
    std::optional<int> budget;

    auto common = [&](CLI::App* sc) {
        sc->add_option("config", config_path, "JSON config file")->required();
        sc->add_option("--out", out, "Output path")->required();
        sc->add_option("--seed", seed, "Master seed");
        sc->add_option("--threads", threads, "Worker cap");
    };
    auto* c_coupling = app.add_subcommand("coupling", "Coupling tensor, heat map and decay fit");
    common(c_coupling);
    auto* w = c_coupling->add_option("--window", window, "Memory window M");
    auto* tt = c_coupling->add_option("--tail-tol", tail_tol, "Tail mass tolerance for choosing M");
    w->excludes(tt);

    auto* c_sim = app.add_subcommand("simulate", "Dataset from the SSFM or the perturbative model");
    common(c_sim);
    c_sim->add_option("--power", power, "Launch power, dBm");
    c_sim->add_option("--blocks", blocks, "Number of blocks");
    c_sim->add_option("--model", model, "ssfm, order1 or order2");

    auto* c_val = app.add_subcommand("validate", "NMSE of the model against the SSFM over a power sweep");
    common(c_val);
    c_val->add_option("--power-sweep", sweep, "Comma-separated powers, dBm");
    c_val->add_option("--blocks", blocks, "Blocks per power");

    auto* c_cap = app.add_subcommand("capacity", "Capacity lower bounds over a power grid");
    common(c_cap);
    c_cap->add_option("--bounds", bounds, "Comma-separated subset of awgn,ss,gn,i0,i1,i1_envelope,i2");
    c_cap->add_option("--powers", powers, "Comma-separated powers, dBm");
    c_cap->add_option("--budget", budget, "Objective evaluations per optimized point");

    auto* c_shape = app.add_subcommand("shape", "Optimize one ripple distribution");
    common(c_shape);
    c_shape->add_option("--power", power, "Launch power, dBm")->required();
    c_shape->add_option("--levels", levels, "Number of rings q")->check(CLI::Range(2, 8));
    c_shape->add_option("--budget", budget, "Objective evaluations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        RunConfig rc = load_config(config_path);
        if (seed) rc.seed = *seed;
        if (threads) rc.threads = std::max(1u, *threads);
        if (window) rc.coupling.window = *window;
        if (tail_tol) {
            rc.coupling.window = 0;
            rc.coupling.tail_tol = *tail_tol;
        }
        if (blocks) rc.simulate.blocks = *blocks;
        if (power) rc.simulate.power_dbm = *power;
        if (!sweep.empty()) rc.validate.powers_dbm = parse_list(sweep, "power-sweep");
        if (!powers.empty()) rc.capacity.powers_dbm = parse_list(powers, "powers");
        if (!bounds.empty()) rc.capacity.bounds = bounds;
        if (budget) rc.capacity.budget = *budget;

        if (*c_coupling) return cmd_coupling(rc, out);
        if (*c_sim) return cmd_simulate(rc, out, model);
        if (*c_val) return cmd_validate(rc, out);
        if (*c_cap) return cmd_capacity(rc, out);
        if (*c_shape) return cmd_shape(rc, out, *power, levels);
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const DimensionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
