#pragma once

// Run configuration: one JSON document with {chain, errors, physics, sweep}
// sections. The shipped defaults reproduce the reference scenario
// (n = 4, eta_r = eta_pd = 0.9, eta_d = 0.95, L_att = 22 km, c = 2e5 km/s).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydberg/ensemble_physics.hpp"
#include "rydberg/repeater_sim.hpp"

namespace rydberg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    std::vector<double> length_grid_km = {200, 400, 600, 800, 1000, 1250};
    std::vector<std::string> variants = {"no_purify", "purify_0.99", "purify_0.98"};
    std::vector<double> tau_list_s = {200e-6, 300e-6};
    double delta_min_mhz = 20.0;
    double delta_max_mhz = 100.0;
    int delta_points = 20;
    std::uint64_t trials = 2000;
};

struct RunConfig {
    std::string scenario = "paper_fig2";
    ChainConfig chain;
    double tau_s = 300e-6;
    AngularConvention angular = AngularConvention::TwoPi;
    PhysicsParams physics;
    double working_density_cm3 = 3.0e13;
    double box_side_um = 2.0;
    SweepConfig sweep;
    std::optional<std::uint64_t> seed;

    void validate() const;
};

RunConfig default_run_config();
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace rydberg
