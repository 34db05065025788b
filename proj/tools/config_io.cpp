#include "config_io.hpp"

#include <fstream>
#include <set>

#include "fibercap/error.hpp"

namespace fibercap::cli {

namespace {

using nlohmann::json;

class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ValidationError(path_, "expected an object");
    }
    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ValidationError(field(it.key()), "unknown key");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ValidationError(field(key), "wrong type");
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }
    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig rc;
    Section top(j, "");
    top.get("seed", rc.seed);
    top.get("threads", rc.threads);
    if (top.has("link")) {
        Section s(top.at("link"), "link");
        auto& l = rc.link;
        s.get("alpha_db_per_km", l.alpha_db_per_km);
        s.get("beta2_ps2_per_km", l.beta2_ps2_per_km);
        s.get("gamma_per_w_per_km", l.gamma_per_w_per_km);
        s.get("span_length_km", l.span_length_km);
        s.get("n_spans", l.n_spans);
        s.get("symbol_rate_gbaud", l.symbol_rate_gbaud);
        s.get("fwhm_ps", l.fwhm_ps);
        s.get("noise_density_w_per_hz", l.noise_density_w_per_hz);
        s.get("bandwidth_ghz", l.bandwidth_ghz);
        s.done();
    }
    if (top.has("coupling")) {
        Section s(top.at("coupling"), "coupling");
        s.get("window", rc.coupling.window);
        s.get("tail_tol", rc.coupling.tail_tol);
        s.get("max_window", rc.coupling.max_window);
        s.get("xi_nodes", rc.coupling.xi_nodes);
        s.done();
    }
    if (top.has("simulate")) {
        Section s(top.at("simulate"), "simulate");
        auto& m = rc.simulate;
        s.get("power_dbm", m.power_dbm);
        s.get("blocks", m.blocks);
        s.get("symbols", m.symbols);
        s.get("constellation", m.constellation);
        s.get("max_step_m", m.max_step_m);
        s.get("max_phase_rad", m.max_phase_rad);
        s.get("samples_per_symbol", m.samples_per_symbol);
        s.done();
    }
    if (top.has("validate")) {
        Section s(top.at("validate"), "validate");
        s.get("powers_dbm", rc.validate.powers_dbm);
        s.get("max_order", rc.validate.max_order);
        s.done();
    }
    if (top.has("capacity")) {
        Section s(top.at("capacity"), "capacity");
        auto& c = rc.capacity;
        std::string surrogate = to_string(c.surrogate);
        s.get("powers_dbm", c.powers_dbm);
        s.get("bounds", c.bounds);
        s.get("levels", c.levels);
        s.get("surrogate", surrogate);
        s.get("budget", c.budget);
        s.get("starts", c.starts);
        s.get("search_samples", c.search_samples);
        s.get("final_samples", c.final_samples);
        s.done();
        c.surrogate = parse_surrogate(surrogate);
    }
    top.done();
    if (rc.threads < 1) throw ValidationError("threads", "must be at least 1");
    if (rc.coupling.window < 0) throw ValidationError("coupling.window", "must be >= 0");
    if (rc.coupling.max_window < 1) throw ValidationError("coupling.max_window", "must be >= 1");
    if (!(rc.coupling.tail_tol > 0.0 && rc.coupling.tail_tol < 1.0))
        throw ValidationError("coupling.tail_tol", "must lie in (0, 1)");
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace fibercap::cli
