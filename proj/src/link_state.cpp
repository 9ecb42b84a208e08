#include "rydberg/link_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rydberg {

const char* pair_form_name(PairForm f) {
    return f == PairForm::PhiMix ? "phi_mix" : "psi_mix";
}

const char* chain_action_name(ChainAction a) {
    switch (a) {
        case ChainAction::Link: return "link";
        case ChainAction::Swap: return "swap";
        case ChainAction::Purify: return "purify";
    }
    return "?";
}

void MixedPairState::validate() const {
    if (fidelity < 0.0 || fidelity > 1.0) {
        throw std::invalid_argument("pair fidelity must be in [0,1]");
    }
    if (q1 < 0.0 || q0 < 0.0 || q1 + q0 > 1.0) {
        throw std::invalid_argument("leakage weights must satisfy 0 <= q1+q0 <= 1");
    }
}

namespace {

void check_unit_interval(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must be in [0,1]");
    }
}

double parity_combination(double f) { return f * f + (1.0 - f) * (1.0 - f); }

}  // namespace

MixedPairState link(const LocalPairParams& a, const LocalPairParams& b,
                    const OrderConstants& oc) {
    if (a.f_loc < 0.5 || a.f_loc > 1.0 || b.f_loc < 0.5 || b.f_loc > 1.0) {
        throw std::invalid_argument("F_loc must be in [0.5, 1]");
    }
    MixedPairState out;
    out.fidelity = a.f_loc * b.f_loc + (1.0 - a.f_loc) * (1.0 - b.f_loc);
    out.q1 = std::min(1.0, oc.link_q1 * 0.5 * (a.p1 + b.p1));
    out.q0 = 0.0;  // removed by the two-photon coincidence
    out.form = PairForm::PhiMix;
    out.validate();
    return out;
}

SwapUpdateResult swap_update(const MixedPairState& pair, double f_cnot, double eta_d,
                             const OrderConstants& oc) {
    pair.validate();
    check_unit_interval(f_cnot, "F_cnot");
    check_unit_interval(eta_d, "eta_d");
    SwapUpdateResult out;
    out.state = pair;
    out.state.fidelity = parity_combination(pair.fidelity) * f_cnot;
    out.success_prob =
        std::max(0.0, 1.0 - oc.swap_loss * 2.0 * pair.q1) * eta_d * eta_d;
    return out;
}

PurifyUpdateResult purify_update(const MixedPairState& pair, double f_cnot, double eta_d,
                                 const OrderConstants& oc) {
    pair.validate();
    check_unit_interval(f_cnot, "F_cnot");
    check_unit_interval(eta_d, "eta_d");
    double f = pair.fidelity;
    double parity = parity_combination(f);
    PurifyUpdateResult out;
    out.state = pair;
    out.state.fidelity = (f * f / parity) * f_cnot * f_cnot;
    out.state.q1 = std::min(1.0, oc.purify_q1 * pair.q1 / (f * f));
    out.state.form = PairForm::PsiMix;
    out.success_prob = parity * eta_d * eta_d;
    out.no_gain = out.state.fidelity < f;
    return out;
}

ChainTrajectory chain_trajectory(double f_loc, double f_cnot, int n,
                                 const PurifySchedule& schedule, double p1, double eta_d,
                                 const OrderConstants& oc) {
    if (n < 0) throw std::invalid_argument("nesting level count must be >= 0");
    ChainTrajectory traj;
    MixedPairState s = link({f_loc, p1}, {f_loc, p1}, oc);
    traj.entries.push_back({0, ChainAction::Link, s.fidelity, s.q1, 1.0});

    auto purify_once = [&](int level) {
        auto r = purify_update(s, f_cnot, eta_d, oc);
        s = r.state;
        traj.entries.push_back({level, ChainAction::Purify, s.fidelity, s.q1, r.success_prob});
        ++traj.purify_rounds;
    };
    auto scheduled_rounds = [&](int level) -> int {
        if (schedule.mode != PurifySchedule::Mode::Explicit) return 0;
        if (level >= int(schedule.rounds_at_level.size())) return 0;
        return schedule.rounds_at_level[level];
    };

    for (int r = 0; r < scheduled_rounds(0); ++r) purify_once(0);

    for (int level = 1; level <= n; ++level) {
        auto sw = swap_update(s, f_cnot, eta_d, oc);
        s = sw.state;
        traj.entries.push_back({level, ChainAction::Swap, s.fidelity, s.q1, sw.success_prob});
        if (schedule.mode == PurifySchedule::Mode::AutoThreshold) {
            int rounds = 0;
            while (s.fidelity <= schedule.threshold &&
                   rounds < schedule.max_rounds_per_level) {
                purify_once(level);
                ++rounds;
            }
        } else {
            for (int r = 0; r < scheduled_rounds(level); ++r) purify_once(level);
        }
    }
    traj.final_state = s;
    return traj;
}

}  // namespace rydberg
