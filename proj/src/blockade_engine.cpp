#include "rydberg/blockade_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace rydberg {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

std::string describe_angle(Pulse::Angle a) {
    return a == Pulse::Angle::Pi ? "pi" : "pi/2";
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::R: return "r";
        case Mode::Rp: return "r'";
        case Mode::S: return "s";
        case Mode::T: return "t";
        case Mode::Sp: return "s'";
        case Mode::Tp: return "t'";
    }
    return "?";
}

std::optional<Mode> mode_from_name(std::string_view name) {
    for (int i = 0; i < kModeCount; ++i) {
        Mode m = Mode(i);
        if (name == mode_name(m)) return m;
    }
    return std::nullopt;
}

std::vector<Mode> ModeSet::modes() const {
    std::vector<Mode> out;
    for (int i = 0; i < kModeCount; ++i) {
        if (has(Mode(i))) out.push_back(Mode(i));
    }
    return out;
}

std::string ModeSet::to_string() const {
    std::string out = "{";
    bool first = true;
    for (Mode m : modes()) {
        if (!first) out += ",";
        out += mode_name(m);
        first = false;
    }
    out += "}";
    return out;
}

Pulse Pulse::collective_pi(std::size_t ensemble, Mode rydberg) {
    Pulse p;
    p.kind = Kind::CollectiveGroundToRydberg;
    p.target = ensemble;
    p.from = std::nullopt;
    p.to = rydberg;
    p.angle = Angle::Pi;
    return p;
}

Pulse Pulse::single_pi(std::size_t ensemble, Mode a, Mode b) {
    Pulse p;
    p.kind = Kind::SingleExcitation;
    p.target = ensemble;
    p.from = a;
    p.to = b;
    p.angle = Angle::Pi;
    return p;
}

Pulse Pulse::single_half_pi(std::size_t ensemble, Mode a, Mode b) {
    Pulse p = single_pi(ensemble, a, b);
    p.angle = Angle::HalfPi;
    return p;
}

std::string Pulse::describe() const {
    std::ostringstream oss;
    if (kind == Kind::CollectiveGroundToRydberg) {
        oss << "collective " << describe_angle(angle) << " -> " << mode_name(to)
            << " on ensemble " << target;
    } else {
        oss << "single " << describe_angle(angle) << " (" << mode_name(*from) << ","
            << mode_name(to) << ") on ensemble " << target;
    }
    return oss.str();
}

SystemState::SystemState(std::vector<std::string> ensemble_names,
                         std::vector<int> blockade_domains)
    : names_(std::move(ensemble_names)), domains_(std::move(blockade_domains)) {
    if (names_.empty() || names_.size() > kMaxEnsembles) {
        throw EngineError("ensemble count must be in [1, 8]");
    }
    if (names_.size() != domains_.size()) {
        throw EngineError("one blockade domain id required per ensemble");
    }
    amps_[0] = Amplitude(1.0, 0.0);
}

SystemState SystemState::from_components(
    std::vector<std::string> ensemble_names, std::vector<int> blockade_domains,
    const std::vector<std::pair<std::vector<ModeSet>, Amplitude>>& components) {
    SystemState st(std::move(ensemble_names), std::move(blockade_domains));
    st.amps_.clear();
    for (const auto& [sets, amp] : components) {
        if (sets.size() != st.num_ensembles()) {
            throw LayoutMismatch("component length does not match ensemble count");
        }
        BasisKey key = 0;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            key = st.replace(key, i, sets[i]);
        }
        st.amps_[key] += amp;
    }
    double n2 = st.norm_squared();
    if (n2 <= 0.0) throw EngineError("cannot normalize the zero state");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& [k, a] : st.amps_) a *= inv;
    st.prune_and_check_norm();
    return st;
}

std::size_t SystemState::index_of(std::string_view ensemble_name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == ensemble_name) return i;
    }
    throw LayoutMismatch("unknown ensemble name: " + std::string(ensemble_name));
}

ModeSet SystemState::extract(BasisKey key, std::size_t ensemble) const {
    int shift = 8 * int(kMaxEnsembles - 1 - ensemble);
    return ModeSet::from_raw(std::uint8_t((key >> shift) & 0xffu));
}

SystemState::BasisKey SystemState::replace(BasisKey key, std::size_t ensemble,
                                           ModeSet value) const {
    int shift = 8 * int(kMaxEnsembles - 1 - ensemble);
    key &= ~(BasisKey(0xffu) << shift);
    key |= BasisKey(value.raw()) << shift;
    return key;
}

std::vector<ModeSet> SystemState::unpack(BasisKey key) const {
    std::vector<ModeSet> out;
    out.reserve(num_ensembles());
    for (std::size_t i = 0; i < num_ensembles(); ++i) out.push_back(extract(key, i));
    return out;
}

std::vector<std::pair<std::vector<ModeSet>, Amplitude>> SystemState::components() const {
    std::vector<std::pair<std::vector<ModeSet>, Amplitude>> out;
    out.reserve(amps_.size());
    for (const auto& [key, amp] : amps_) out.emplace_back(unpack(key), amp);
    return out;
}

Amplitude SystemState::amplitude_of(const std::vector<ModeSet>& component) const {
    if (component.size() != num_ensembles()) {
        throw LayoutMismatch("component length does not match ensemble count");
    }
    BasisKey key = 0;
    for (std::size_t i = 0; i < component.size(); ++i) key = replace(key, i, component[i]);
    auto it = amps_.find(key);
    return it == amps_.end() ? Amplitude(0.0, 0.0) : it->second;
}

double SystemState::norm_squared() const {
    double n2 = 0.0;
    for (const auto& [key, amp] : amps_) n2 += std::norm(amp);
    return n2;
}

void SystemState::prune_and_check_norm() {
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < kAmplitudePruneTol) {
            it = amps_.erase(it);
        } else {
            ++it;
        }
    }
    double n2 = norm_squared();
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw EngineError("state norm drifted: |psi|^2 = " + std::to_string(n2));
    }
}

namespace {

void validate_pulse(const SystemState& state, const Pulse& pulse) {
    if (pulse.target >= state.num_ensembles()) {
        throw IllDefinedPulse("pulse targets ensemble beyond the layout");
    }
    if (pulse.kind == Pulse::Kind::CollectiveGroundToRydberg) {
        if (pulse.from.has_value()) {
            throw IllDefinedPulse("collective pulse couples the ground reservoir only");
        }
        if (!is_rydberg(pulse.to)) {
            throw IllDefinedPulse("collective pulse destination must be r or r'");
        }
        if (pulse.angle != Pulse::Angle::Pi) {
            throw IllDefinedPulse("only collective pi pulses are defined");
        }
    } else {
        if (!pulse.from.has_value()) {
            throw IllDefinedPulse("single-excitation pulse needs a source mode");
        }
        if (*pulse.from == pulse.to) {
            throw IllDefinedPulse("single-excitation transition needs two distinct modes");
        }
    }
}

// True when a transfer into Rydberg mode `dest` on this component is held by
// the blockade: some Rydberg-flagged mode is occupied in the target's domain.
bool blockade_holds(const SystemState& state, SystemState::BasisKey key,
                    std::size_t target) {
    int domain = state.domain_of(target);
    for (std::size_t e = 0; e < state.num_ensembles(); ++e) {
        if (state.domain_of(e) != domain) continue;
        if (state.extract(key, e).any_rydberg()) return true;
    }
    return false;
}

}  // namespace

SystemState apply_pulse(const SystemState& state, const Pulse& pulse, PulseEffect* effect) {
    validate_pulse(state, pulse);
    SystemState out = state;
    auto& in_amps = state.raw_amplitudes();
    bool suppressed = false;

    std::map<SystemState::BasisKey, Amplitude> next;

    if (pulse.kind == Pulse::Kind::CollectiveGroundToRydberg) {
        Mode m = pulse.to;
        for (const auto& [key, amp] : in_amps) {
            ModeSet ms = state.extract(key, pulse.target);
            if (ms.has(m)) {
                next[state.replace(key, pulse.target, ms.without(m))] += amp;
            } else if (blockade_holds(state, key, pulse.target)) {
                next[key] += amp;
                suppressed = true;
            } else {
                next[state.replace(key, pulse.target, ms.with(m))] += amp;
            }
        }
    } else {
        Mode a = *pulse.from;
        Mode b = pulse.to;
        for (const auto& [key, amp] : in_amps) {
            ModeSet ms = state.extract(key, pulse.target);
            if (ms.has(a) && ms.has(b)) {
                throw IllDefinedPulse("component holds both " + std::string(mode_name(a)) +
                                      " and " + mode_name(b) + " of a single-atom transition");
            }
        }
        for (const auto& [key, amp] : in_amps) {
            ModeSet ms = state.extract(key, pulse.target);
            bool has_a = ms.has(a);
            bool has_b = ms.has(b);
            if (!has_a && !has_b) {
                next[key] += amp;
                continue;
            }
            Mode src = has_a ? a : b;
            Mode dst = has_a ? b : a;
            if (is_rydberg(dst) && blockade_holds(state, key, pulse.target)) {
                next[key] += amp;
                suppressed = true;
                continue;
            }
            auto moved =
                state.replace(key, pulse.target, ms.without(src).with(dst));
            if (pulse.angle == Pulse::Angle::Pi) {
                next[moved] += amp;
            } else if (has_a) {
                next[key] += amp * kInvSqrt2;
                next[moved] += amp * kInvSqrt2;
            } else {
                next[moved] -= amp * kInvSqrt2;
                next[key] += amp * kInvSqrt2;
            }
        }
    }

    out.raw_amplitudes() = std::move(next);
    out.prune_and_check_norm();
    if (effect) effect->blockade_suppressed = suppressed;
    return out;
}

double fidelity(const SystemState& state, const SystemState& reference) {
    if (state.ensemble_names() != reference.ensemble_names() ||
        state.blockade_domains() != reference.blockade_domains()) {
        throw LayoutMismatch("fidelity requires identical ensemble layouts");
    }
    Amplitude overlap(0.0, 0.0);
    const auto& a = state.raw_amplitudes();
    const auto& b = reference.raw_amplitudes();
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const auto& [key, amp] : small) {
        auto it = large.find(key);
        if (it == large.end()) continue;
        // <reference|state>
        Amplitude sa = (&small == &a) ? amp : it->second;
        Amplitude ra = (&small == &a) ? it->second : amp;
        overlap += std::conj(ra) * sa;
    }
    return std::norm(overlap);
}

namespace {

void check_qubit_subspace(const SystemState& state, std::size_t ensemble) {
    for (const auto& [key, amp] : state.raw_amplitudes()) {
        ModeSet ms = state.extract(key, ensemble);
        int count = int(ms.has(Mode::S)) + int(ms.has(Mode::T));
        if (count != 1) {
            throw InvalidQubitSubspace("ensemble " + std::to_string(ensemble) +
                                       " holds " + std::to_string(count) +
                                       " of {s,t} in component " + ms.to_string());
        }
    }
}

SystemState renormalized(SystemState st, double probability) {
    double inv = 1.0 / std::sqrt(probability);
    for (auto& [key, amp] : st.raw_amplitudes()) amp *= inv;
    st.prune_and_check_norm();
    return st;
}

}  // namespace

std::vector<MeasurementOutcome> enumerate_measurement(const SystemState& state,
                                                      std::size_t ensemble,
                                                      MeasureBasis basis) {
    if (ensemble >= state.num_ensembles()) {
        throw LayoutMismatch("measurement targets ensemble beyond the layout");
    }
    check_qubit_subspace(state, ensemble);
    std::vector<MeasurementOutcome> outcomes;

    if (basis == MeasureBasis::ComputationalST) {
        for (Mode m : {Mode::S, Mode::T}) {
            SystemState collapsed = state;
            auto& amps = collapsed.raw_amplitudes();
            double prob = 0.0;
            for (auto it = amps.begin(); it != amps.end();) {
                if (collapsed.extract(it->first, ensemble).has(m)) {
                    prob += std::norm(it->second);
                    ++it;
                } else {
                    it = amps.erase(it);
                }
            }
            if (prob < 1e-15) continue;
            outcomes.push_back(
                {m == Mode::S ? 's' : 't', prob, renormalized(std::move(collapsed), prob)});
        }
    } else {
        // Group amplitudes by everything except the s/t occupancy of the
        // measured ensemble: rest -> (a_s, a_t).
        std::map<SystemState::BasisKey, std::pair<Amplitude, Amplitude>> groups;
        for (const auto& [key, amp] : state.raw_amplitudes()) {
            ModeSet ms = state.extract(key, ensemble);
            auto rest = state.replace(key, ensemble, ms.without(Mode::S).without(Mode::T));
            if (ms.has(Mode::S)) {
                groups[rest].first += amp;
            } else {
                groups[rest].second += amp;
            }
        }
        for (int sign : {+1, -1}) {
            double prob = 0.0;
            SystemState collapsed = state;
            auto& amps = collapsed.raw_amplitudes();
            amps.clear();
            for (const auto& [rest, pair] : groups) {
                Amplitude b = (pair.first + double(sign) * pair.second) * kInvSqrt2;
                if (std::abs(b) < 1e-15) continue;
                prob += std::norm(b);
                ModeSet rest_ms = collapsed.extract(rest, ensemble);
                amps[collapsed.replace(rest, ensemble, rest_ms.with(Mode::S))] +=
                    b * kInvSqrt2;
                amps[collapsed.replace(rest, ensemble, rest_ms.with(Mode::T))] +=
                    double(sign) * b * kInvSqrt2;
            }
            if (prob < 1e-15) continue;
            outcomes.push_back(
                {sign > 0 ? '+' : '-', prob, renormalized(std::move(collapsed), prob)});
        }
    }
    return outcomes;
}

MeasurementOutcome sample_measurement(const SystemState& state, std::size_t ensemble,
                                      MeasureBasis basis, std::mt19937_64& rng) {
    auto outcomes = enumerate_measurement(state, ensemble, basis);
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0.0;
    for (auto& o : outcomes) {
        acc += o.probability;
        if (u < acc) return o;
    }
    return outcomes.back();
}

SystemState restrict_to(const SystemState& state, const std::vector<std::size_t>& keep) {
    if (keep.empty() || keep.size() >= state.num_ensembles()) {
        throw LayoutMismatch("restriction must keep a strict non-empty subset");
    }
    std::vector<bool> kept(state.num_ensembles(), false);
    for (std::size_t k : keep) {
        if (k >= state.num_ensembles()) throw LayoutMismatch("restriction index out of range");
        kept[k] = true;
    }

    // Split each basis key into (kept part, dropped part) and check that the
    // amplitude matrix over the two parts has rank 1 (product state).
    using Key = SystemState::BasisKey;
    auto split = [&](Key key) {
        Key kp = 0, dp = 0;
        for (std::size_t e = 0; e < state.num_ensembles(); ++e) {
            ModeSet ms = state.extract(key, e);
            if (kept[e]) {
                kp |= Key(ms.raw()) << (8 * e);
            } else {
                dp |= Key(ms.raw()) << (8 * e);
            }
        }
        return std::pair<Key, Key>(kp, dp);
    };

    std::map<Key, std::map<Key, Amplitude>> matrix;  // kept -> dropped -> amp
    std::map<Key, double> drop_weight;
    std::map<Key, Key> kept_original;  // kept part -> one original key carrying it
    for (const auto& [key, amp] : state.raw_amplitudes()) {
        auto [kp, dp] = split(key);
        matrix[kp][dp] += amp;
        drop_weight[dp] += std::norm(amp);
        kept_original.emplace(kp, key);
    }

    Key d0 = drop_weight.begin()->first;
    for (const auto& [dp, w] : drop_weight) {
        if (w > drop_weight[d0]) d0 = dp;
    }

    std::map<Key, Amplitude> x;  // kept-part factor, unnormalized
    double x_norm2 = 0.0;
    for (const auto& [kp, row] : matrix) {
        auto it = row.find(d0);
        if (it == row.end()) continue;
        x[kp] = it->second;
        x_norm2 += std::norm(it->second);
    }
    if (x_norm2 <= 0.0) throw NotAProductState("degenerate restriction");

    // y_d = <x, M[:,d]> / |x|^2, then verify M = x y^T.
    std::map<Key, Amplitude> y;
    for (const auto& [dp, w] : drop_weight) {
        Amplitude dot(0.0, 0.0);
        for (const auto& [kp, xv] : x) {
            auto it = matrix[kp].find(dp);
            if (it != matrix[kp].end()) dot += std::conj(xv) * it->second;
        }
        y[dp] = dot / x_norm2;
    }
    double residual = 0.0;
    for (const auto& [kp, row] : matrix) {
        for (const auto& [dp, amp] : row) {
            Amplitude model = x.count(kp) ? x[kp] * y[dp] : Amplitude(0.0, 0.0);
            residual += std::norm(amp - model);
        }
    }
    for (const auto& [dp, yv] : y) {
        for (const auto& [kp, xv] : x) {
            if (!matrix[kp].count(dp)) residual += std::norm(xv * yv);
        }
    }
    if (residual > 1e-10) {
        throw NotAProductState("dropped ensembles are entangled with the kept ones");
    }

    std::vector<std::string> names;
    std::vector<int> domains;
    std::map<int, int> domain_map;
    for (std::size_t k : keep) {
        names.push_back(state.ensemble_names()[k]);
        int d = state.domain_of(k);
        auto it = domain_map.emplace(d, int(domain_map.size())).first;
        domains.push_back(it->second);
    }

    std::vector<std::pair<std::vector<ModeSet>, Amplitude>> comps;
    for (const auto& [kp, xv] : x) {
        Key original = kept_original.at(kp);
        std::vector<ModeSet> sets;
        for (std::size_t k : keep) sets.push_back(state.extract(original, k));
        comps.emplace_back(std::move(sets), xv);
    }
    return SystemState::from_components(std::move(names), std::move(domains), comps);
}

std::string debug_dump_json(const SystemState& state) {
    struct Entry {
        std::vector<std::vector<std::string>> labels;
        double re, im;
    };
    std::vector<Entry> entries;
    for (const auto& [sets, amp] : state.components()) {
        Entry e;
        for (const ModeSet& ms : sets) {
            std::vector<std::string> names;
            for (Mode m : ms.modes()) names.emplace_back(mode_name(m));
            e.labels.push_back(std::move(names));
        }
        e.re = amp.real();
        e.im = amp.imag();
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.labels < b.labels; });

    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json item;
        item["component"] = e.labels;
        item["re"] = e.re;
        item["im"] = e.im;
        arr.push_back(std::move(item));
    }
    return arr.dump();
}

}  // namespace rydberg
