#pragma once

// Reduced density-matrix bookkeeping of one entangled link: fidelity F of the
// two-excitation block plus leaked single-excitation (q1) and vacuum (q0)
// weights, with the update rules for linking, swapping and purification.
//
// First-order O(x) expressions are implemented as exactly x times a
// configurable multiplier (default 1).

#include <stdexcept>
#include <vector>

namespace rydberg {

// Which Bell state carries the infidelity of the two-excitation block:
// phi_mix = |phi->, psi_mix = |psi+> (after the purification basis change).
enum class PairForm { PhiMix, PsiMix };

const char* pair_form_name(PairForm f);

struct MixedPairState {
    double fidelity = 1.0;  // weight of |phi+> within the two-excitation block
    double q1 = 0.0;        // single-excitation leakage weight
    double q0 = 0.0;        // vacuum weight (zero after linking)
    PairForm form = PairForm::PhiMix;

    void validate() const;
};

struct LocalPairParams {
    double f_loc = 1.0;
    double p1 = 0.0;
    double p0 = 0.0;
};

// Multipliers for the first-order O(.) bookkeeping terms.
struct OrderConstants {
    double link_q1 = 1.0;    // O(p1) after linking
    double swap_loss = 1.0;  // O(2 p1) in the swap success probability
    double purify_q1 = 1.0;  // O(p1 / F^2) after purification
};

// Two-photon linking of two local pairs: F0 = Fa*Fb + (1-Fa)(1-Fb), vacuum
// removed by the coincidence condition.
MixedPairState link(const LocalPairParams& a, const LocalPairParams& b,
                    const OrderConstants& oc = {});

struct SwapUpdateResult {
    MixedPairState state;
    double success_prob = 1.0;
};

// F <- (F^2 + (1-F)^2) * F_cnot; q1 unchanged; success = (1 - 2 q1) eta_d^2.
SwapUpdateResult swap_update(const MixedPairState& pair, double f_cnot, double eta_d,
                             const OrderConstants& oc = {});

struct PurifyUpdateResult {
    MixedPairState state;
    double success_prob = 1.0;
    bool no_gain = false;  // the update decreased F (possible for low F_cnot)
};

// F <- F^2/(F^2+(1-F)^2) * F_cnot^2; success = (F^2+(1-F)^2) eta_d^2;
// q1 <- q1 / F^2; the bad-component tag flips to psi after the basis change.
PurifyUpdateResult purify_update(const MixedPairState& pair, double f_cnot, double eta_d,
                                 const OrderConstants& oc = {});

struct PurifySchedule {
    enum class Mode { None, AutoThreshold, Explicit };
    Mode mode = Mode::None;
    // AutoThreshold: after each swap level, purify while F <= threshold.
    double threshold = 0.9;
    int max_rounds_per_level = 8;
    // Explicit: rounds_at_level[l] purification rounds after level l
    // (index 0 = right after linking); missing trailing entries mean zero.
    std::vector<int> rounds_at_level;
};

enum class ChainAction { Link, Swap, Purify };

const char* chain_action_name(ChainAction a);

struct TrajectoryEntry {
    int level = 0;
    ChainAction action = ChainAction::Link;
    double fidelity = 1.0;
    double q1 = 0.0;
    double success_prob = 1.0;
};

struct ChainTrajectory {
    std::vector<TrajectoryEntry> entries;
    int purify_rounds = 0;
    MixedPairState final_state;
};

// Deterministic fidelity/q1 trajectory across linking, n swap levels and the
// scheduled purification rounds.
ChainTrajectory chain_trajectory(double f_loc, double f_cnot, int n,
                                 const PurifySchedule& schedule, double p1 = 0.0,
                                 double eta_d = 1.0, const OrderConstants& oc = {});

}  // namespace rydberg
