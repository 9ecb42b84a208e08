#include "rydberg/pulse_protocols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rydberg {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

std::vector<std::pair<ModeSet, ModeSet>> pair_components(PairStateKind k,
                                                         std::vector<double>& signs) {
    signs = {1.0, (k == PairStateKind::PhiMinus || k == PairStateKind::PsiMinus) ? -1.0
                                                                                 : 1.0};
    if (k == PairStateKind::PhiPlus || k == PairStateKind::PhiMinus) {
        return {{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})},
                {ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}};
    }
    return {{ModeSet::of({Mode::S}), ModeSet::of({Mode::T})},
            {ModeSet::of({Mode::T}), ModeSet::of({Mode::S})}};
}

std::string label_of(const SystemState& st, SystemState::BasisKey key) {
    std::string out;
    for (std::size_t e = 0; e < st.num_ensembles(); ++e) {
        if (e) out += " ";
        ModeSet ms = st.extract(key, e);
        auto modes = ms.modes();
        if (modes.size() == 1) {
            out += mode_name(modes[0]);
        } else {
            out += ms.to_string();
        }
    }
    return out;
}

}  // namespace

std::string format_state_terms(const SystemState& state) {
    struct Term {
        std::string comp;
        Amplitude amp;
    };
    std::vector<Term> terms;
    for (const auto& [sets, amp] : state.components()) {
        std::string comp = "|";
        for (std::size_t i = 0; i < sets.size(); ++i) {
            if (i) comp += ",";
            comp += sets[i].to_string();
        }
        comp += ">";
        terms.push_back({std::move(comp), amp});
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.comp < b.comp; });
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        double re = t.amp.real(), im = t.amp.imag();
        if (std::abs(im) < 1e-12) {
            if (i == 0) {
                std::snprintf(buf, sizeof buf, "%.6f", re);
                out += buf;
            } else {
                std::snprintf(buf, sizeof buf, " %c %.6f", re < 0 ? '-' : '+', std::abs(re));
                out += buf;
            }
        } else {
            std::snprintf(buf, sizeof buf, "%s(%.6f%+.6fi)", i == 0 ? "" : " + ", re, im);
            out += buf;
        }
        out += t.comp;
    }
    return out.empty() ? "0" : out;
}

// --- Bell generation ---------------------------------------------------------

ProtocolScript bell_generation_script(std::size_t e) {
    ProtocolScript s;
    s.name = "bell_generation";
    s.pulses = {
        Pulse::collective_pi(e, Mode::R),          // first collective excitation
        Pulse::single_pi(e, Mode::R, Mode::S),     // park it in s
        Pulse::collective_pi(e, Mode::R),          // second collective excitation
        Pulse::single_pi(e, Mode::R, Mode::Tp),    // park it in t'
        Pulse::single_half_pi(e, Mode::S, Mode::R),
        Pulse::single_pi(e, Mode::Tp, Mode::Rp),   // blocked on the r branch
        Pulse::single_pi(e, Mode::Rp, Mode::Sp),
        Pulse::single_pi(e, Mode::R, Mode::T),
    };
    return s;
}

SystemState bell_generation(const SystemState& ground_state, std::size_t ensemble) {
    SystemState st = ground_state;
    for (const Pulse& p : bell_generation_script(ensemble).pulses) {
        st = apply_pulse(st, p);
    }
    return st;
}

SystemState bell_generation_reference(const SystemState& layout_like, std::size_t ensemble) {
    std::vector<ModeSet> a(layout_like.num_ensembles());
    std::vector<ModeSet> b(layout_like.num_ensembles());
    a[ensemble] = ModeSet::of({Mode::S, Mode::Sp});
    b[ensemble] = ModeSet::of({Mode::T, Mode::Tp});
    return SystemState::from_components(layout_like.ensemble_names(),
                                        layout_like.blockade_domains(),
                                        {{a, 1.0}, {b, 1.0}});
}

// --- CNOT ---------------------------------------------------------------------

ProtocolScript cnot_script(std::size_t control, std::size_t target) {
    ProtocolScript s;
    s.name = "cnot";
    s.pulses = {
        Pulse::single_pi(control, Mode::S, Mode::R),
        Pulse::single_pi(target, Mode::S, Mode::R),
        Pulse::single_pi(target, Mode::R, Mode::T),
        Pulse::single_pi(target, Mode::R, Mode::S),
        Pulse::single_pi(control, Mode::R, Mode::S),
    };
    return s;
}

SystemState cnot_sequence(const SystemState& state, std::size_t control,
                          std::size_t target) {
    if (control >= state.num_ensembles() || target >= state.num_ensembles() ||
        control == target) {
        throw LayoutMismatch("cnot needs two distinct ensembles of the layout");
    }
    if (state.domain_of(control) != state.domain_of(target)) {
        throw NotCoLocated("cnot requires control and target in one blockade domain");
    }
    SystemState st = state;
    for (const Pulse& p : cnot_script(control, target).pulses) {
        st = apply_pulse(st, p);
    }
    return st;
}

ProtocolTrace run_with_trace(const SystemState& input, const std::vector<Pulse>& pulses) {
    ProtocolTrace trace{{}, input};
    for (const Pulse& p : pulses) {
        PulseEffect effect;
        trace.final_state = apply_pulse(trace.final_state, p, &effect);
        trace.steps.push_back(
            {p.describe(), effect.blockade_suppressed, format_state_terms(trace.final_state)});
    }
    return trace;
}

std::vector<CnotTraceRow> cnot_truth_table() {
    const std::vector<std::string> names = {"Bu", "Bd"};
    const std::vector<int> domains = {0, 0};
    auto pulses = cnot_script(0, 1).pulses;

    std::vector<CnotTraceRow> rows;
    for (Mode c : {Mode::S, Mode::T}) {
        for (Mode t : {Mode::S, Mode::T}) {
            SystemState st = SystemState::from_components(
                names, domains, {{{ModeSet::of({c}), ModeSet::of({t})}, 1.0}});
            CnotTraceRow row;
            row.input = std::string(mode_name(c)) + mode_name(t);
            for (const Pulse& p : pulses) {
                PulseEffect effect;
                st = apply_pulse(st, p, &effect);
                if (st.component_count() != 1) {
                    throw EngineError("truth-table row left the basis-state manifold");
                }
                row.suppressed.push_back(effect.blockade_suppressed);
                row.states.push_back(label_of(st, st.raw_amplitudes().begin()->first));
            }
            row.output = row.states.back();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// --- Pair builders -------------------------------------------------------------

SystemState make_two_pair_state(const std::vector<std::string>& names,
                                const std::vector<int>& domains, std::size_t i0,
                                std::size_t j0, PairStateKind k0, std::size_t i1,
                                std::size_t j1, PairStateKind k1) {
    std::vector<double> s0, s1;
    auto c0 = pair_components(k0, s0);
    auto c1 = pair_components(k1, s1);
    std::vector<std::pair<std::vector<ModeSet>, Amplitude>> comps;
    for (std::size_t a = 0; a < c0.size(); ++a) {
        for (std::size_t b = 0; b < c1.size(); ++b) {
            std::vector<ModeSet> sets(names.size());
            sets[i0] = c0[a].first;
            sets[j0] = c0[a].second;
            sets[i1] = c1[b].first;
            sets[j1] = c1[b].second;
            comps.emplace_back(std::move(sets), s0[a] * s1[b]);
        }
    }
    return SystemState::from_components(names, domains, comps);
}

// --- Entanglement swapping ------------------------------------------------------

namespace {
const std::vector<std::string> kSwapNames = {"A", "Bu", "Bd", "C"};
const std::vector<int> kSwapDomains = {0, 1, 1, 2};
constexpr std::size_t kSwapA = 0, kSwapBu = 1, kSwapBd = 2, kSwapC = 3;
}  // namespace

ProtocolScript swap_script() {
    ProtocolScript s;
    s.name = "entanglement_swap";
    s.pulses = cnot_script(kSwapBu, kSwapBd).pulses;
    s.measurements = {{kSwapBu, MeasureBasis::PlusMinusST},
                      {kSwapBd, MeasureBasis::ComputationalST}};
    // Derived symbolically for phi+ x phi+ inputs under the engine's phase
    // convention; two pi/2 pulses on (s,t) realize the needed phase flip
    // (-Z up to a global phase), which plain pi swaps cannot produce.
    auto x_c = Pulse::single_pi(kSwapC, Mode::S, Mode::T);
    auto h2_c = Pulse::single_half_pi(kSwapC, Mode::S, Mode::T);
    s.corrections["+s"] = {};
    s.corrections["+t"] = {x_c};
    s.corrections["-s"] = {x_c, h2_c, h2_c};
    s.corrections["-t"] = {h2_c, h2_c};
    return s;
}

SystemState make_swap_input(PairStateKind left, PairStateKind right) {
    return make_two_pair_state(kSwapNames, kSwapDomains, kSwapA, kSwapBu, left, kSwapBd,
                               kSwapC, right);
}

SystemState swap_target_reference() {
    std::vector<std::string> names = {"A", "C"};
    std::vector<int> domains = {0, 1};
    return SystemState::from_components(
        names, domains,
        {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}, 1.0}});
}

namespace {

SystemState swap_apply_corrections(const ProtocolScript& script, const SystemState& st,
                                   const std::string& outcome) {
    SystemState out = st;
    for (const Pulse& p : script.corrections.at(outcome)) out = apply_pulse(out, p);
    return out;
}

void check_swap_layout(const SystemState& st) {
    if (st.num_ensembles() != 4) {
        throw LayoutMismatch("swap expects the [A, Bu, Bd, C] layout");
    }
    if (st.domain_of(kSwapBu) != st.domain_of(kSwapBd)) {
        throw NotCoLocated("swap requires Bu and Bd in one blockade domain");
    }
}

}  // namespace

std::vector<SwapOutcome> swap_protocol_enumerate(const SystemState& four_ensembles) {
    check_swap_layout(four_ensembles);
    auto script = swap_script();
    SystemState st = cnot_sequence(four_ensembles, kSwapBu, kSwapBd);
    std::vector<SwapOutcome> out;
    for (const auto& m1 : enumerate_measurement(st, kSwapBu, MeasureBasis::PlusMinusST)) {
        for (const auto& m2 :
             enumerate_measurement(m1.collapsed, kSwapBd, MeasureBasis::ComputationalST)) {
            std::string outcome{m1.label, m2.label};
            SystemState corrected = swap_apply_corrections(script, m2.collapsed, outcome);
            out.push_back({outcome, m1.probability * m2.probability,
                           restrict_to(corrected, {kSwapA, kSwapC})});
        }
    }
    return out;
}

SwapOutcome swap_protocol_sample(const SystemState& four_ensembles, std::mt19937_64& rng) {
    check_swap_layout(four_ensembles);
    auto script = swap_script();
    SystemState st = cnot_sequence(four_ensembles, kSwapBu, kSwapBd);
    auto m1 = sample_measurement(st, kSwapBu, MeasureBasis::PlusMinusST, rng);
    auto m2 = sample_measurement(m1.collapsed, kSwapBd, MeasureBasis::ComputationalST, rng);
    std::string outcome{m1.label, m2.label};
    SystemState corrected = swap_apply_corrections(script, m2.collapsed, outcome);
    return {outcome, m1.probability * m2.probability,
            restrict_to(corrected, {kSwapA, kSwapC})};
}

// --- Entanglement purification ----------------------------------------------------

namespace {
const std::vector<std::string> kPurifyNames = {"Au", "Cu", "Ad", "Cd"};
const std::vector<int> kPurifyDomains = {0, 1, 0, 1};
constexpr std::size_t kAu = 0, kCu = 1, kAd = 2, kCd = 3;
}  // namespace

std::vector<WeightedState> purify_two_pair_mixture(double fidelity, PairForm form) {
    if (fidelity < 0.0 || fidelity > 1.0) {
        throw std::invalid_argument("mixture fidelity must be in [0,1]");
    }
    PairStateKind bad =
        form == PairForm::PhiMix ? PairStateKind::PhiMinus : PairStateKind::PsiPlus;
    std::vector<WeightedState> out;
    const double f = fidelity;
    const std::pair<double, PairStateKind> options[2] = {{f, PairStateKind::PhiPlus},
                                                         {1.0 - f, bad}};
    for (const auto& up : options) {
        for (const auto& down : options) {
            double w = up.first * down.first;
            if (w <= 0.0) continue;
            out.push_back({w, make_two_pair_state(kPurifyNames, kPurifyDomains, kAu, kCu,
                                                  up.second, kAd, kCd, down.second)});
        }
    }
    return out;
}

std::vector<PurifyBranch> purify_branches(const SystemState& two_pairs, PairForm form) {
    if (two_pairs.num_ensembles() != 4) {
        throw LayoutMismatch("purification expects the [Au, Cu, Ad, Cd] layout");
    }
    SystemState st = two_pairs;
    if (form == PairForm::PhiMix) {
        // Basis change |phi-> -> |psi+>: a pi/2 (s,t) pulse at both sites of
        // each pair. One-sided application cannot leave |phi+> invariant.
        for (std::size_t e : {kAu, kCu, kAd, kCd}) {
            st = apply_pulse(st, Pulse::single_half_pi(e, Mode::S, Mode::T));
        }
    }
    st = cnot_sequence(st, kAu, kAd);
    st = cnot_sequence(st, kCu, kCd);
    std::vector<PurifyBranch> out;
    for (const auto& m1 : enumerate_measurement(st, kAd, MeasureBasis::ComputationalST)) {
        for (const auto& m2 :
             enumerate_measurement(m1.collapsed, kCd, MeasureBasis::ComputationalST)) {
            out.push_back({std::string{m1.label, m2.label},
                           m1.probability * m2.probability, m1.label == m2.label,
                           restrict_to(m2.collapsed, {kAu, kCu})});
        }
    }
    return out;
}

SystemState purify_target_reference() {
    std::vector<std::string> names = {"Au", "Cu"};
    std::vector<int> domains = {0, 1};
    return SystemState::from_components(
        names, domains,
        {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}, 1.0}});
}

PurifyStats purify_circuit_enumerate(double fidelity, PairForm form) {
    auto mixture = purify_two_pair_mixture(fidelity, form);
    SystemState target = purify_target_reference();
    PurifyStats stats;
    double kept_fid_weight = 0.0;
    for (const auto& ws : mixture) {
        for (const auto& br : purify_branches(ws.state, form)) {
            if (!br.kept) continue;
            double w = ws.weight * br.probability;
            stats.kept_probability += w;
            kept_fid_weight += w * rydberg::fidelity(br.up_state, target);
        }
    }
    stats.kept_fidelity =
        stats.kept_probability > 0.0 ? kept_fid_weight / stats.kept_probability : 0.0;
    return stats;
}

PurifySample purify_circuit_sample(double fidelity, PairForm form, std::mt19937_64& rng) {
    auto mixture = purify_two_pair_mixture(fidelity, form);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    const SystemState* chosen = &mixture.back().state;
    for (const auto& ws : mixture) {
        acc += ws.weight;
        if (u < acc) {
            chosen = &ws.state;
            break;
        }
    }

    SystemState st = *chosen;
    if (form == PairForm::PhiMix) {
        for (std::size_t e : {kAu, kCu, kAd, kCd}) {
            st = apply_pulse(st, Pulse::single_half_pi(e, Mode::S, Mode::T));
        }
    }
    st = cnot_sequence(st, kAu, kAd);
    st = cnot_sequence(st, kCu, kCd);
    auto m1 = sample_measurement(st, kAd, MeasureBasis::ComputationalST, rng);
    auto m2 = sample_measurement(m1.collapsed, kCd, MeasureBasis::ComputationalST, rng);
    return {m1.label == m2.label, std::string{m1.label, m2.label},
            restrict_to(m2.collapsed, {kAu, kCu})};
}

}  // namespace rydberg
