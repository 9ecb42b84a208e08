#pragma once

// The concrete pulse sequences as executable programs on the blockade engine:
// Bell-state generation inside one ensemble, the two-ensemble CNOT,
// entanglement swapping with its outcome-correction table, and the
// entanglement-purification circuit.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "rydberg/blockade_engine.hpp"
#include "rydberg/link_state.hpp"

namespace rydberg {

struct ProtocolScript {
    std::string name;
    std::vector<Pulse> pulses;
    std::vector<std::pair<std::size_t, MeasureBasis>> measurements;
    // measurement-outcome tuple (e.g. "+s") -> local correction pulses
    std::map<std::string, std::vector<Pulse>> corrections;
};

// --- Bell-state generation: |empty> -> (|{s,s'}> + |{t,t'}>)/sqrt(2) -------

ProtocolScript bell_generation_script(std::size_t ensemble = 0);
SystemState bell_generation(const SystemState& ground_state, std::size_t ensemble = 0);
// The target of the generation, under the engine's phase convention.
SystemState bell_generation_reference(const SystemState& layout_like, std::size_t ensemble = 0);

// --- Two-ensemble CNOT (control flips target when it holds t) --------------

ProtocolScript cnot_script(std::size_t control, std::size_t target);
SystemState cnot_sequence(const SystemState& state, std::size_t control, std::size_t target);

// Step-by-step execution trace of an arbitrary pulse list.
struct TraceStep {
    std::string pulse;
    bool suppressed = false;  // blockade held some component at this step
    std::string state;        // rendered term list
};
struct ProtocolTrace {
    std::vector<TraceStep> steps;
    SystemState final_state;
};
ProtocolTrace run_with_trace(const SystemState& input, const std::vector<Pulse>& pulses);

// Truth-table trace: each row starts from a basis input and stays a basis
// state throughout the five pulses.
struct CnotTraceRow {
    std::string input;                 // e.g. "ss"
    std::vector<std::string> states;   // state label after each pulse
    std::vector<bool> suppressed;      // per pulse
    std::string output;
};
std::vector<CnotTraceRow> cnot_truth_table();

// --- Pair-state builders (post-linking memory qubits) ----------------------

enum class PairStateKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// Product of two-qubit pair states on (i0,j0) and (i1,j1) of a 4-ensemble
// layout; used to prepare swap and purification inputs.
SystemState make_two_pair_state(const std::vector<std::string>& names,
                                const std::vector<int>& domains, std::size_t i0,
                                std::size_t j0, PairStateKind k0, std::size_t i1,
                                std::size_t j1, PairStateKind k1);

// --- Entanglement swapping --------------------------------------------------

// Layout convention: ensembles [A, Bu, Bd, C]; Bu and Bd share a blockade
// domain. Input is Bell(A,Bu) x Bell(Bd,C).
ProtocolScript swap_script();
SystemState make_swap_input(PairStateKind left = PairStateKind::PhiPlus,
                            PairStateKind right = PairStateKind::PhiPlus);

struct SwapOutcome {
    std::string outcome;   // "+s", "+t", "-s", "-t"
    double probability = 0.0;
    SystemState ac_state;  // corrected state on [A, C]
};
std::vector<SwapOutcome> swap_protocol_enumerate(const SystemState& four_ensembles);
SwapOutcome swap_protocol_sample(const SystemState& four_ensembles, std::mt19937_64& rng);

// Reference Bell state on the restricted [A, C] layout.
SystemState swap_target_reference();

// --- Entanglement purification ----------------------------------------------

// Layout convention: ensembles [Au, Cu, Ad, Cd]; Au/Ad and Cu/Cd share
// blockade domains. Inputs are rank-2 mixtures handled as weighted pure
// states: form phi_mix has the bad component |phi->, psi_mix has |psi+>.
struct WeightedState {
    double weight = 1.0;
    SystemState state;
};
std::vector<WeightedState> purify_two_pair_mixture(double fidelity, PairForm form);

struct PurifyBranch {
    std::string outcome;  // measured (Ad, Cd) labels, e.g. "ss"
    double probability = 0.0;
    bool kept = false;    // outcomes equal
    SystemState up_state; // restricted to [Au, Cu]
};
// Runs the circuit (basis change when form is phi_mix, two CNOTs, target
// measurements) on one pure 4-ensemble input and enumerates the outcomes.
std::vector<PurifyBranch> purify_branches(const SystemState& two_pairs, PairForm form);

struct PurifyStats {
    double kept_probability = 0.0;
    double kept_fidelity = 0.0;  // vs |phi+> on the kept pair
};
// Exact weighted enumeration over the two-pair mixture with input fidelity F.
PurifyStats purify_circuit_enumerate(double fidelity, PairForm form = PairForm::PhiMix);

struct PurifySample {
    bool kept = false;
    std::string outcome;
    SystemState up_state;
};
PurifySample purify_circuit_sample(double fidelity, PairForm form, std::mt19937_64& rng);

// Reference |phi+> on the kept [Au, Cu] layout.
SystemState purify_target_reference();

// Renders a state as a sorted, fixed-precision term list (trace format).
std::string format_state_terms(const SystemState& state);

}  // namespace rydberg
