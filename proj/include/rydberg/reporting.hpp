#pragma once

// Deterministic report generation behind the CLI subcommands: CSV sweeps,
// the JSON simulation report and the protocol verification transcript.
// Identical config + seed always produce byte-identical strings.

#include <cstdint>
#include <string>

#include "rydberg/config.hpp"

namespace rydberg {

// CSV: delta_dd_MHz,tau_us,omega_opt_rad_s,e_loc_min,e_cnot_min
// (omega_opt_rad_s is the optimizer output for the local-generation
// objective with Omega_N = Omega_s).
std::string error_sweep_csv(const RunConfig& cfg);

// CSV: L_km,n,variant,p_link,T_analytic_s,T_mc_mean_s,T_mc_ci95_s,
//      rate_per_s,final_F,purify_rounds
std::string rate_sweep_csv(const RunConfig& cfg, std::uint64_t trials, std::uint64_t seed);

// CSV: level,action,F,q1,success_prob
std::string trajectory_csv(const ChainConfig& chain);

// JSON report mirroring SimStats (see docs/schemas/simulate_report.schema.json).
std::string simulate_report_json(const ChainConfig& chain, std::uint64_t trials);

std::string physics_report_text(const RunConfig& cfg);
std::string physics_report_json(const RunConfig& cfg);

struct VerifyOptions {
    int only_row = -1;               // 1..4 prints a single truth-table row
    bool corrupt_convention = false; // negative control: flips one pulse sign
};
struct VerifyReport {
    bool ok = false;
    std::string text;
};
VerifyReport verify_protocol_report(const VerifyOptions& options = {});

}  // namespace rydberg
