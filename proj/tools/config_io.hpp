#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibercap/config.hpp"
#include "fibercap/mutual_info.hpp"

namespace fibercap::cli {

struct CouplingSection {
    int window = 0;  // 0: choose from tail_tol
    double tail_tol = 1e-3;
    int max_window = 200;
    int xi_nodes = 32;
};

struct SimulateSection {
    double power_dbm = -10.0;
    std::size_t blocks = 64;
    std::size_t symbols = 1024;
    std::string constellation = "gaussian_iid";
    double max_step_m = 1000.0;
    double max_phase_rad = 1e-3;
    int samples_per_symbol = 8;
};

struct ValidateSection {
    std::vector<double> powers_dbm{-15.0, -12.5, -10.0, -7.5, -5.0};
    int max_order = 2;
};

struct CapacitySection {
    std::vector<double> powers_dbm;
    std::string bounds = "ss,gn,i0,i1,i2";
    std::vector<std::size_t> levels{2, 3};
    Surrogate surrogate = Surrogate::level_spread;
    int budget = 2000;
    int starts = 5;
    std::size_t search_samples = 4000;
    std::size_t final_samples = 200000;
};

struct RunConfig {
    EngineeringParams link;
    CouplingSection coupling;
    SimulateSection simulate;
    ValidateSection validate;
    CapacitySection capacity;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

/// Parses a config document; unknown keys and wrong types raise ValidationError
/// naming the dotted path of the field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

}  // namespace fibercap::cli
