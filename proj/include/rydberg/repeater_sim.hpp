#pragma once

// Entanglement-distribution time of the nested repeater chain: the analytic
// product formula and a discrete-event Monte Carlo that validates it.
//
// Event model: each of the 2^n elementary segments repeats Bernoulli(p) link
// attempts, one per classical communication interval T_cc = L0/c. A level-i
// swap consumes both child pairs; on failure both subtrees are regenerated
// from scratch. A scheduled purification round consumes a twin pair generated
// concurrently on doubled hardware, so each attempt costs the maximum of the
// two generation times. Local operations cost zero simulated time.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rydberg/link_state.hpp"

namespace rydberg {

struct ChainConfig {
    double total_length_km = 1000.0;
    int nesting_levels = 4;  // segments = 2^n
    double attenuation_length_km = 22.0;
    double signal_speed_km_s = 2.0e5;
    double eta_r = 0.9;   // retrieval efficiency
    double eta_pd = 0.9;  // photon detection efficiency
    double eta_d = 0.95;  // ionization detection efficiency
    double f_loc = 0.99;
    double f_cnot = 0.99;
    double p1 = 0.0;  // leaked single-excitation weight

    enum class AlphaSwapModel { PaperEtaD, Measured };
    AlphaSwapModel alpha_swap_model = AlphaSwapModel::PaperEtaD;

    PurifySchedule purify;
    bool strict_cc = false;  // charge 2^(i-1) T_cc per level-i herald attempt
    std::uint64_t rng_seed = 1;
    double convergence_bound = 0.1;  // flag NonConvergence when ci95/mean exceeds it

    int segments() const { return 1 << nesting_levels; }
    double segment_length_km() const { return total_length_km / segments(); }
    double t_cc_seconds() const { return segment_length_km() / signal_speed_km_s; }
    void validate() const;
};

// p = 1/2 eta_r^2 eta_pd^2 e^(-L0/L_att) (1 - p1)
double link_success_prob(const ChainConfig& cfg);

// Swap success probability per attempt: eta_d^2 (1 - 2 p1).
double swap_success_prob(const ChainConfig& cfg);

// E[max of k iid Geom(p)] by inclusion-exclusion (compensated summation).
double expected_max_geometric(int k, double p);
// alpha0 = p * E[max of k Geom(p)].
double exact_alpha0(int k_segments, double p);

struct AnalyticBreakdown {
    double p_link = 0.0;
    double alpha0 = 0.0;
    double alpha_swap = 0.0;  // per swap level
    std::vector<double> purify_time_factors;  // 2/p_purify per scheduled round
    double t_total_s = 0.0;
    int purify_rounds = 0;
    double final_fidelity = 0.0;
};

// T_tot = alpha0 * alpha_swap^n * (T_cc/p) * prod(2/p_purify). With model
// Measured, per-level alphas from a prior Monte Carlo replace alpha_swap^n.
AnalyticBreakdown analytic_total_time(const ChainConfig& cfg,
                                      const std::vector<double>* measured_alphas = nullptr);

using AttemptHistogram = std::map<std::uint32_t, std::uint64_t>;

struct SimStats {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean_t_tot_s = 0.0;
    double ci95_s = 0.0;
    double rate_per_s = 0.0;
    double alpha0_estimate = 0.0;      // NaN when no failure-free trials exist
    std::uint64_t clean_trials = 0;    // trials without any swap/purify failure
    bool converged = true;
    double ci_over_mean = 0.0;
    AttemptHistogram link_attempts;                  // per segment generation
    std::vector<AttemptHistogram> swap_attempts;     // index 1..n
    std::vector<AttemptHistogram> purify_attempts;   // index 1..n (0 = post-link)
    std::vector<double> mean_swap_attempts;          // index 1..n
    MixedPairState final_state;
    int purify_rounds = 0;
};

SimStats monte_carlo(const ChainConfig& cfg, std::uint64_t trials);

struct RateSweepRow {
    double length_km = 0.0;
    int nesting_levels = 0;
    std::string variant;
    double p_link = 0.0;
    double t_analytic_s = 0.0;
    double t_mc_mean_s = 0.0;
    double t_mc_ci95_s = 0.0;
    double rate_per_s = 0.0;
    double final_fidelity = 0.0;
    int purify_rounds = 0;
    bool converged = true;
};

// Named variants: "no_purify" keeps the base fidelities and schedule off;
// "purify_0.99" / "purify_0.98" set F_loc = F_cnot and the auto-threshold
// schedule.
ChainConfig apply_variant(const ChainConfig& base, const std::string& variant);

std::vector<RateSweepRow> rate_sweep(const ChainConfig& base,
                                     const std::vector<double>& length_grid_km,
                                     const std::vector<std::string>& variants,
                                     std::uint64_t trials, std::uint64_t seed);

}  // namespace rydberg
