#pragma once

// Sparse state-vector simulator over collective-excitation basis states of
// one or more atomic ensembles, with an ideal (binary) Rydberg-blockade rule.
//
// Each ensemble stores a set of occupied collective modes; the fully ground
// ensemble |g...g> is the empty set. Two modes (r, r') are Rydberg-flagged:
// any pulse transfer whose destination is a Rydberg-flagged mode is
// suppressed on a basis component whenever another Rydberg-flagged mode is
// occupied anywhere in the target ensemble's blockade domain (a blockade
// domain groups co-located ensembles).
//
// Phase convention, fixed so that golden-state tests are exact:
//   pi pulse on (a,b):    phase-free mode swap, amplitude factor +1
//   pi/2 pulse on (a,b):  |a> -> (|a>+|b>)/sqrt(2),  |b> -> (-|a>+|b>)/sqrt(2)

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rydberg {

using Amplitude = std::complex<double>;

inline constexpr double kAmplitudePruneTol = 1e-12;
inline constexpr double kNormTol = 1e-12;

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IllDefinedPulse : EngineError {
    using EngineError::EngineError;
};
struct InvalidQubitSubspace : EngineError {
    using EngineError::EngineError;
};
struct LayoutMismatch : EngineError {
    using EngineError::EngineError;
};
struct NotCoLocated : EngineError {
    using EngineError::EngineError;
};
struct NotAProductState : EngineError {
    using EngineError::EngineError;
};

// Collective storage and Rydberg modes of one ensemble.
enum class Mode : std::uint8_t { R = 0, Rp = 1, S = 2, T = 3, Sp = 4, Tp = 5 };

inline constexpr int kModeCount = 6;

constexpr bool is_rydberg(Mode m) { return m == Mode::R || m == Mode::Rp; }

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(std::string_view name);

// Set of occupied collective modes in one ensemble (each mode holds at most
// one excitation, so plain set semantics).
class ModeSet {
  public:
    constexpr ModeSet() = default;

    static constexpr ModeSet of(std::initializer_list<Mode> modes) {
        ModeSet s;
        for (Mode m : modes) s.bits_ |= bit(m);
        return s;
    }
    static constexpr ModeSet from_raw(std::uint8_t raw) { return ModeSet(raw); }

    constexpr bool has(Mode m) const { return (bits_ & bit(m)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool any_rydberg() const { return (bits_ & 0b11) != 0; }
    constexpr int rydberg_count() const { return int(has(Mode::R)) + int(has(Mode::Rp)); }
    constexpr ModeSet with(Mode m) const { return ModeSet(std::uint8_t(bits_ | bit(m))); }
    constexpr ModeSet without(Mode m) const { return ModeSet(std::uint8_t(bits_ & ~bit(m))); }
    constexpr std::uint8_t raw() const { return bits_; }

    std::vector<Mode> modes() const;
    std::string to_string() const;  // e.g. "{s,t'}", "{}" for ground

    auto operator<=>(const ModeSet&) const = default;

  private:
    explicit constexpr ModeSet(std::uint8_t b) : bits_(b) {}
    static constexpr std::uint8_t bit(Mode m) { return std::uint8_t(1u << int(m)); }
    std::uint8_t bits_ = 0;
};

// One laser operation.
struct Pulse {
    enum class Kind { CollectiveGroundToRydberg, SingleExcitation };
    enum class Angle { Pi, HalfPi };

    Kind kind = Kind::SingleExcitation;
    std::size_t target = 0;         // ensemble index
    std::optional<Mode> from;       // nullopt = ground reservoir (collective only)
    Mode to = Mode::R;
    Angle angle = Angle::Pi;

    static Pulse collective_pi(std::size_t ensemble, Mode rydberg);
    static Pulse single_pi(std::size_t ensemble, Mode a, Mode b);
    static Pulse single_half_pi(std::size_t ensemble, Mode a, Mode b);

    std::string describe() const;
};

struct PulseEffect {
    bool blockade_suppressed = false;  // some component was held by the blockade
};

// Normalized superposition over tuples of per-ensemble mode sets. Immutable
// value type; all operations return new states.
class SystemState {
  public:
    static constexpr std::size_t kMaxEnsembles = 8;

    SystemState(std::vector<std::string> ensemble_names, std::vector<int> blockade_domains);

    // Builds a state from (components, amplitude) pairs and normalizes it.
    static SystemState from_components(
        std::vector<std::string> ensemble_names, std::vector<int> blockade_domains,
        const std::vector<std::pair<std::vector<ModeSet>, Amplitude>>& components);

    std::size_t num_ensembles() const { return names_.size(); }
    const std::vector<std::string>& ensemble_names() const { return names_; }
    const std::vector<int>& blockade_domains() const { return domains_; }
    int domain_of(std::size_t ensemble) const { return domains_.at(ensemble); }
    std::size_t index_of(std::string_view ensemble_name) const;

    std::size_t component_count() const { return amps_.size(); }
    std::vector<std::pair<std::vector<ModeSet>, Amplitude>> components() const;
    Amplitude amplitude_of(const std::vector<ModeSet>& component) const;
    double norm_squared() const;

    // Internal sparse representation, keyed so that iteration order is
    // deterministic. Exposed for the engine free functions below.
    using BasisKey = std::uint64_t;
    const std::map<BasisKey, Amplitude>& raw_amplitudes() const { return amps_; }
    std::map<BasisKey, Amplitude>& raw_amplitudes() { return amps_; }

    ModeSet extract(BasisKey key, std::size_t ensemble) const;
    BasisKey replace(BasisKey key, std::size_t ensemble, ModeSet value) const;
    std::vector<ModeSet> unpack(BasisKey key) const;

    void prune_and_check_norm();

  private:
    std::vector<std::string> names_;
    std::vector<int> domains_;
    std::map<BasisKey, Amplitude> amps_;
};

SystemState apply_pulse(const SystemState& state, const Pulse& pulse,
                        PulseEffect* effect = nullptr);

// |<reference|state>|^2. Throws LayoutMismatch if the ensemble layouts differ.
double fidelity(const SystemState& state, const SystemState& reference);

enum class MeasureBasis { ComputationalST, PlusMinusST };

struct MeasurementOutcome {
    char label = '?';  // 's', 't', '+', '-'
    double probability = 0.0;
    SystemState collapsed;
};

// Projective measurement of one ensemble in the {|s>,|t>} qubit subspace.
// Every nonzero component must hold exactly one of {s,t} in that ensemble.
std::vector<MeasurementOutcome> enumerate_measurement(const SystemState& state,
                                                      std::size_t ensemble, MeasureBasis basis);
MeasurementOutcome sample_measurement(const SystemState& state, std::size_t ensemble,
                                      MeasureBasis basis, std::mt19937_64& rng);

// Keeps only the listed ensembles. The state must factorize between kept and
// dropped ensembles (verified to 1e-10), otherwise NotAProductState.
SystemState restrict_to(const SystemState& state, const std::vector<std::size_t>& keep);

// Debug dump: JSON array of {component, re, im} with components listed as
// per-ensemble mode-name lists, sorted lexicographically.
std::string debug_dump_json(const SystemState& state);

}  // namespace rydberg
