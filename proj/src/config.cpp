#include "rydberg/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rydberg {

namespace {

using nlohmann::json;

template <class T>
void read_into(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

PurifySchedule::Mode purify_mode_from(const std::string& name) {
    if (name == "none") return PurifySchedule::Mode::None;
    if (name == "auto_threshold" || name == "auto") return PurifySchedule::Mode::AutoThreshold;
    if (name == "explicit") return PurifySchedule::Mode::Explicit;
    throw ConfigError("unknown purify mode: " + name);
}

std::string purify_mode_name(PurifySchedule::Mode m) {
    switch (m) {
        case PurifySchedule::Mode::None: return "none";
        case PurifySchedule::Mode::AutoThreshold: return "auto_threshold";
        case PurifySchedule::Mode::Explicit: return "explicit";
    }
    return "none";
}

AngularConvention angular_from(const std::string& name) {
    if (name == "2pi") return AngularConvention::TwoPi;
    if (name == "1") return AngularConvention::One;
    throw ConfigError("angular convention must be '2pi' or '1'");
}

}  // namespace

void RunConfig::validate() const {
    chain.validate();
    physics.validate();
    if (tau_s <= 0.0) throw ConfigError("tau must be positive");
    if (working_density_cm3 <= 0.0 || box_side_um <= 0.0) {
        throw ConfigError("working density and box side must be positive");
    }
    if (sweep.length_grid_km.empty()) throw ConfigError("sweep length grid is empty");
    if (sweep.variants.empty()) throw ConfigError("sweep variant list is empty");
    if (sweep.tau_list_s.empty()) throw ConfigError("sweep tau list is empty");
    if (sweep.delta_points < 1) throw ConfigError("delta grid needs at least one point");
    if (sweep.delta_min_mhz <= 0.0 || sweep.delta_max_mhz < sweep.delta_min_mhz) {
        throw ConfigError("delta grid bounds must satisfy 0 < min <= max");
    }
    if (sweep.trials < 1) throw ConfigError("sweep trial count must be >= 1");
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    read_into(j, "scenario", cfg.scenario);
    if (j.contains("seed")) {
        std::uint64_t s = 0;
        read_into(j, "seed", s);
        cfg.seed = s;
    }

    if (j.contains("chain")) {
        const json& c = j.at("chain");
        read_into(c, "L_km", cfg.chain.total_length_km);
        read_into(c, "n", cfg.chain.nesting_levels);
        read_into(c, "L_att_km", cfg.chain.attenuation_length_km);
        read_into(c, "c_km_s", cfg.chain.signal_speed_km_s);
        read_into(c, "eta_r", cfg.chain.eta_r);
        read_into(c, "eta_pd", cfg.chain.eta_pd);
        read_into(c, "eta_d", cfg.chain.eta_d);
        read_into(c, "F_loc", cfg.chain.f_loc);
        read_into(c, "F_cnot", cfg.chain.f_cnot);
        read_into(c, "p1", cfg.chain.p1);
        read_into(c, "strict_cc", cfg.chain.strict_cc);
        read_into(c, "convergence_bound", cfg.chain.convergence_bound);
        if (c.contains("purify")) {
            const json& p = c.at("purify");
            std::string mode = purify_mode_name(cfg.chain.purify.mode);
            read_into(p, "mode", mode);
            cfg.chain.purify.mode = purify_mode_from(mode);
            read_into(p, "threshold", cfg.chain.purify.threshold);
            read_into(p, "max_rounds_per_level", cfg.chain.purify.max_rounds_per_level);
            read_into(p, "rounds_at_level", cfg.chain.purify.rounds_at_level);
        }
    }

    if (j.contains("errors")) {
        const json& e = j.at("errors");
        double tau_us = cfg.tau_s * 1e6;
        read_into(e, "tau_us", tau_us);
        cfg.tau_s = tau_us * 1e-6;
        std::string conv = cfg.angular == AngularConvention::TwoPi ? "2pi" : "1";
        read_into(e, "angular_convention", conv);
        cfg.angular = angular_from(conv);
    }

    if (j.contains("physics")) {
        const json& p = j.at("physics");
        read_into(p, "n_principal", cfg.physics.n_principal);
        read_into(p, "c1", cfg.physics.c1);
        read_into(p, "c1_prime", cfg.physics.c1_prime);
        read_into(p, "k_per_um", cfg.physics.k_per_um);
        read_into(p, "w0_um", cfg.physics.w0_um);
        read_into(p, "finesse", cfg.physics.finesse);
        read_into(p, "c_r", cfg.physics.c_r);
        read_into(p, "delta_dd_mhz", cfg.physics.delta_dd_mhz);
        read_into(p, "verbatim_signs", cfg.physics.verbatim_signs);
        read_into(p, "mhz_to_energy_factor", cfg.physics.mhz_to_energy_factor);
        read_into(p, "working_density_cm3", cfg.working_density_cm3);
        read_into(p, "box_side_um", cfg.box_side_um);
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        read_into(s, "L_km", cfg.sweep.length_grid_km);
        read_into(s, "variants", cfg.sweep.variants);
        if (s.contains("tau_us")) {
            std::vector<double> tau_us;
            read_into(s, "tau_us", tau_us);
            cfg.sweep.tau_list_s.clear();
            for (double t : tau_us) cfg.sweep.tau_list_s.push_back(t * 1e-6);
        }
        if (s.contains("delta_dd_mhz")) {
            const json& d = s.at("delta_dd_mhz");
            read_into(d, "min", cfg.sweep.delta_min_mhz);
            read_into(d, "max", cfg.sweep.delta_max_mhz);
            read_into(d, "points", cfg.sweep.delta_points);
        }
        read_into(s, "trials", cfg.sweep.trials);
    }

    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

std::string run_config_to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["scenario"] = cfg.scenario;
    if (cfg.seed) j["seed"] = *cfg.seed;
    auto& c = j["chain"];
    c["L_km"] = cfg.chain.total_length_km;
    c["n"] = cfg.chain.nesting_levels;
    c["L_att_km"] = cfg.chain.attenuation_length_km;
    c["c_km_s"] = cfg.chain.signal_speed_km_s;
    c["eta_r"] = cfg.chain.eta_r;
    c["eta_pd"] = cfg.chain.eta_pd;
    c["eta_d"] = cfg.chain.eta_d;
    c["F_loc"] = cfg.chain.f_loc;
    c["F_cnot"] = cfg.chain.f_cnot;
    c["p1"] = cfg.chain.p1;
    c["strict_cc"] = cfg.chain.strict_cc;
    c["convergence_bound"] = cfg.chain.convergence_bound;
    c["purify"]["mode"] = purify_mode_name(cfg.chain.purify.mode);
    c["purify"]["threshold"] = cfg.chain.purify.threshold;
    c["purify"]["max_rounds_per_level"] = cfg.chain.purify.max_rounds_per_level;
    c["purify"]["rounds_at_level"] = cfg.chain.purify.rounds_at_level;
    auto& e = j["errors"];
    e["tau_us"] = cfg.tau_s * 1e6;
    e["angular_convention"] = cfg.angular == AngularConvention::TwoPi ? "2pi" : "1";
    auto& p = j["physics"];
    p["n_principal"] = cfg.physics.n_principal;
    p["c1"] = cfg.physics.c1;
    p["c1_prime"] = cfg.physics.c1_prime;
    p["k_per_um"] = cfg.physics.k_per_um;
    p["w0_um"] = cfg.physics.w0_um;
    p["finesse"] = cfg.physics.finesse;
    p["c_r"] = cfg.physics.c_r;
    p["delta_dd_mhz"] = cfg.physics.delta_dd_mhz;
    p["verbatim_signs"] = cfg.physics.verbatim_signs;
    p["mhz_to_energy_factor"] = cfg.physics.mhz_to_energy_factor;
    p["working_density_cm3"] = cfg.working_density_cm3;
    p["box_side_um"] = cfg.box_side_um;
    auto& s = j["sweep"];
    s["L_km"] = cfg.sweep.length_grid_km;
    s["variants"] = cfg.sweep.variants;
    std::vector<double> tau_us;
    for (double t : cfg.sweep.tau_list_s) tau_us.push_back(t * 1e6);
    s["tau_us"] = tau_us;
    s["delta_dd_mhz"]["min"] = cfg.sweep.delta_min_mhz;
    s["delta_dd_mhz"]["max"] = cfg.sweep.delta_max_mhz;
    s["delta_dd_mhz"]["points"] = cfg.sweep.delta_points;
    s["trials"] = cfg.sweep.trials;
    return j.dump(2) + "\n";
}

}  // namespace rydberg
