#include "rydberg/repeater_sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rydberg/random.hpp"

namespace rydberg {

void ChainConfig::validate() const {
    if (total_length_km <= 0.0 || attenuation_length_km <= 0.0 || signal_speed_km_s <= 0.0) {
        throw std::invalid_argument("lengths and signal speed must be positive");
    }
    if (nesting_levels < 0 || nesting_levels > 16) {
        throw std::invalid_argument("nesting level count must be in [0, 16]");
    }
    for (double eta : {eta_r, eta_pd, eta_d}) {
        if (eta < 0.0 || eta > 1.0) {
            throw std::invalid_argument("efficiencies must be in [0,1]");
        }
    }
    if (f_loc < 0.5 || f_loc > 1.0 || f_cnot < 0.0 || f_cnot > 1.0) {
        throw std::invalid_argument("gate fidelities out of range");
    }
    if (p1 < 0.0 || p1 > 0.5) {
        throw std::invalid_argument("p1 must be in [0, 0.5]");
    }
}

double link_success_prob(const ChainConfig& cfg) {
    cfg.validate();
    double attenuation = std::exp(-cfg.segment_length_km() / cfg.attenuation_length_km);
    return 0.5 * cfg.eta_r * cfg.eta_r * cfg.eta_pd * cfg.eta_pd * attenuation *
           (1.0 - cfg.p1);
}

double swap_success_prob(const ChainConfig& cfg) {
    cfg.validate();
    return cfg.eta_d * cfg.eta_d * (1.0 - 2.0 * cfg.p1);
}

double expected_max_geometric(int k, double p) {
    if (k < 1 || k > 64) throw std::invalid_argument("segment count must be in [1, 64]");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in (0, 1]");
    if (p == 1.0) return 1.0;
    double q = 1.0 - p;
    double sum = 0.0, comp = 0.0;  // Kahan-compensated alternating sum
    double binom = 1.0;
    for (int i = 1; i <= k; ++i) {
        binom *= double(k - i + 1) / double(i);
        double term = binom / (1.0 - std::pow(q, i));
        if (i % 2 == 0) term = -term;
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double exact_alpha0(int k_segments, double p) {
    return p * expected_max_geometric(k_segments, p);
}

namespace {

struct McParams {
    double p_link = 0.0;
    double q_swap = 0.0;
    bool strict_cc = false;
    // p_purify[level][round], level 0..n
    std::vector<std::vector<double>> p_purify;
};

struct McCollect {
    AttemptHistogram link_attempts;
    std::vector<AttemptHistogram> swap_attempts;
    std::vector<AttemptHistogram> purify_attempts;
    std::vector<double> swap_attempt_sum;
    std::vector<std::uint64_t> swap_attempt_count;
    bool any_failure = false;
};

double purified_link_time(const McParams& mc, int level, int rounds, std::mt19937_64& rng,
                          McCollect& col);

// Time (in T_cc units) to produce one freshly swapped level-i link.
double swapped_link_time(const McParams& mc, int level, std::mt19937_64& rng,
                         McCollect& col) {
    if (level == 0) {
        std::uint64_t attempts = geometric_attempts(mc.p_link, rng);
        ++col.link_attempts[std::uint32_t(std::min<std::uint64_t>(attempts, 0xffffffffu))];
        return double(attempts);
    }
    double t = 0.0;
    std::uint32_t attempts = 0;
    for (;;) {
        int child_rounds = int(mc.p_purify[level - 1].size());
        double a = purified_link_time(mc, level - 1, child_rounds, rng, col);
        double b = purified_link_time(mc, level - 1, child_rounds, rng, col);
        t += std::max(a, b);
        if (mc.strict_cc) t += double(1u << (level - 1));
        ++attempts;
        if (bernoulli(mc.q_swap, rng)) break;
        col.any_failure = true;
    }
    ++col.swap_attempts[level][attempts];
    col.swap_attempt_sum[level] += attempts;
    ++col.swap_attempt_count[level];
    return t;
}

// Level-i link after `rounds` purification rounds; each round consumes a twin
// at the previous round's stage.
double purified_link_time(const McParams& mc, int level, int rounds, std::mt19937_64& rng,
                          McCollect& col) {
    if (rounds == 0) return swapped_link_time(mc, level, rng, col);
    double p_round = mc.p_purify[level][rounds - 1];
    double t = 0.0;
    std::uint32_t attempts = 0;
    for (;;) {
        double a = purified_link_time(mc, level, rounds - 1, rng, col);
        double b = purified_link_time(mc, level, rounds - 1, rng, col);
        t += std::max(a, b);
        if (mc.strict_cc && level >= 1) t += double(1u << (level - 1));
        ++attempts;
        if (bernoulli(p_round, rng)) break;
        col.any_failure = true;
    }
    ++col.purify_attempts[level][attempts];
    return t;
}

// Purification success probabilities per (level, round) from the
// deterministic fidelity trajectory.
std::vector<std::vector<double>> purify_probs_from_trajectory(const ChainConfig& cfg,
                                                              const ChainTrajectory& traj) {
    std::vector<std::vector<double>> out(cfg.nesting_levels + 1);
    for (const auto& e : traj.entries) {
        if (e.action == ChainAction::Purify) out[e.level].push_back(e.success_prob);
    }
    return out;
}

ChainTrajectory trajectory_of(const ChainConfig& cfg) {
    return chain_trajectory(cfg.f_loc, cfg.f_cnot, cfg.nesting_levels, cfg.purify, cfg.p1,
                            cfg.eta_d);
}

}  // namespace

AnalyticBreakdown analytic_total_time(const ChainConfig& cfg,
                                      const std::vector<double>* measured_alphas) {
    cfg.validate();
    AnalyticBreakdown out;
    out.p_link = link_success_prob(cfg);
    out.alpha0 = exact_alpha0(cfg.segments(), out.p_link);
    out.alpha_swap = 1.0 / swap_success_prob(cfg);

    auto traj = trajectory_of(cfg);
    out.purify_rounds = traj.purify_rounds;
    out.final_fidelity = traj.final_state.fidelity;

    double t = out.alpha0 * cfg.t_cc_seconds() / out.p_link;
    if (cfg.alpha_swap_model == ChainConfig::AlphaSwapModel::Measured && measured_alphas) {
        for (double a : *measured_alphas) t *= a;
    } else {
        for (int i = 0; i < cfg.nesting_levels; ++i) t *= out.alpha_swap;
    }
    for (const auto& e : traj.entries) {
        if (e.action != ChainAction::Purify) continue;
        double factor = 2.0 / e.success_prob;
        out.purify_time_factors.push_back(factor);
        t *= factor;
    }
    out.t_total_s = t;
    return out;
}

SimStats monte_carlo(const ChainConfig& cfg, std::uint64_t trials) {
    cfg.validate();
    if (trials < 1) throw std::invalid_argument("at least one trial required");

    auto traj = trajectory_of(cfg);
    McParams mc;
    mc.p_link = link_success_prob(cfg);
    mc.q_swap = swap_success_prob(cfg);
    mc.strict_cc = cfg.strict_cc;
    mc.p_purify = purify_probs_from_trajectory(cfg, traj);

    McCollect col;
    col.swap_attempts.assign(cfg.nesting_levels + 1, {});
    col.purify_attempts.assign(cfg.nesting_levels + 1, {});
    col.swap_attempt_sum.assign(cfg.nesting_levels + 1, 0.0);
    col.swap_attempt_count.assign(cfg.nesting_levels + 1, 0);

    double tcc = cfg.t_cc_seconds();
    double sum = 0.0, sum_sq = 0.0;
    double clean_sum_tcc = 0.0;
    std::uint64_t clean = 0;
    int top_rounds = int(mc.p_purify[cfg.nesting_levels].size());

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        auto rng = make_engine(cfg.rng_seed, trial);
        col.any_failure = false;
        double t_units = purified_link_time(mc, cfg.nesting_levels, top_rounds, rng, col);
        double t = t_units * tcc;
        sum += t;
        sum_sq += t * t;
        if (!col.any_failure) {
            ++clean;
            clean_sum_tcc += t_units;
        }
    }

    SimStats stats;
    stats.trials = trials;
    stats.seed = cfg.rng_seed;
    stats.mean_t_tot_s = sum / double(trials);
    double var = (sum_sq - sum * sum / double(trials)) / double(trials > 1 ? trials - 1 : 1);
    stats.ci95_s = 1.96 * std::sqrt(std::max(0.0, var) / double(trials));
    stats.rate_per_s = 1.0 / stats.mean_t_tot_s;
    stats.clean_trials = clean;
    stats.alpha0_estimate = clean > 0
                                ? mc.p_link * clean_sum_tcc / double(clean)
                                : std::numeric_limits<double>::quiet_NaN();
    stats.ci_over_mean = stats.ci95_s / stats.mean_t_tot_s;
    stats.converged = stats.ci_over_mean <= cfg.convergence_bound;
    stats.link_attempts = std::move(col.link_attempts);
    stats.swap_attempts = std::move(col.swap_attempts);
    stats.purify_attempts = std::move(col.purify_attempts);
    stats.mean_swap_attempts.assign(cfg.nesting_levels + 1, 0.0);
    for (int lvl = 1; lvl <= cfg.nesting_levels; ++lvl) {
        if (col.swap_attempt_count[lvl] > 0) {
            stats.mean_swap_attempts[lvl] =
                col.swap_attempt_sum[lvl] / double(col.swap_attempt_count[lvl]);
        }
    }
    stats.final_state = traj.final_state;
    stats.purify_rounds = traj.purify_rounds;
    return stats;
}

ChainConfig apply_variant(const ChainConfig& base, const std::string& variant) {
    ChainConfig cfg = base;
    if (variant == "no_purify") {
        cfg.purify.mode = PurifySchedule::Mode::None;
    } else if (variant == "purify_0.99") {
        cfg.f_loc = cfg.f_cnot = 0.99;
        cfg.purify.mode = PurifySchedule::Mode::AutoThreshold;
    } else if (variant == "purify_0.98") {
        cfg.f_loc = cfg.f_cnot = 0.98;
        cfg.purify.mode = PurifySchedule::Mode::AutoThreshold;
    } else {
        throw std::invalid_argument("unknown rate-sweep variant: " + variant);
    }
    return cfg;
}

std::vector<RateSweepRow> rate_sweep(const ChainConfig& base,
                                     const std::vector<double>& length_grid_km,
                                     const std::vector<std::string>& variants,
                                     std::uint64_t trials, std::uint64_t seed) {
    if (length_grid_km.empty() || variants.empty()) {
        throw std::invalid_argument("rate sweep needs a non-empty grid and variant list");
    }
    std::vector<RateSweepRow> rows;
    std::uint64_t row_index = 0;
    for (double length : length_grid_km) {
        for (const auto& variant : variants) {
            ChainConfig cfg = apply_variant(base, variant);
            cfg.total_length_km = length;
            cfg.rng_seed = derive_seed(seed, row_index);
            auto analytic = analytic_total_time(cfg);
            auto stats = monte_carlo(cfg, trials);
            rows.push_back({length, cfg.nesting_levels, variant, analytic.p_link,
                            analytic.t_total_s, stats.mean_t_tot_s, stats.ci95_s,
                            stats.rate_per_s, analytic.final_fidelity,
                            analytic.purify_rounds, stats.converged});
            ++row_index;
        }
    }
    return rows;
}

}  // namespace rydberg
