#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "rydberg/blockade_engine.hpp"

using namespace rydberg;

namespace {

SystemState single_ensemble(std::initializer_list<Mode> modes) {
    return SystemState::from_components({"E"}, {0}, {{{ModeSet::of(modes)}, 1.0}});
}

SystemState bell_ss_tt(const std::vector<std::string>& names, const std::vector<int>& domains,
                       double sign = 1.0) {
    return SystemState::from_components(
        names, domains,
        {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}, sign}});
}

}  // namespace

TEST_CASE("collective pi pulse creates and removes the Rydberg excitation") {
    SystemState ground({"E"}, {0});
    auto st = apply_pulse(ground, Pulse::collective_pi(0, Mode::R));
    CHECK(std::abs(st.amplitude_of({ModeSet::of({Mode::R})}) - 1.0) < 1e-12);

    auto back = apply_pulse(st, Pulse::collective_pi(0, Mode::R));
    CHECK(std::abs(back.amplitude_of({ModeSet()}) - 1.0) < 1e-12);
}

TEST_CASE("pi/2 pulse splits the stored excitation") {
    auto st = single_ensemble({Mode::S, Mode::Tp});
    auto out = apply_pulse(st, Pulse::single_half_pi(0, Mode::S, Mode::R));
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(out.amplitude_of({ModeSet::of({Mode::S, Mode::Tp})}) - inv_sqrt2) < 1e-12);
    CHECK(std::abs(out.amplitude_of({ModeSet::of({Mode::R, Mode::Tp})}) - inv_sqrt2) < 1e-12);
}

TEST_CASE("blockade suppresses the transfer on the Rydberg-occupied branch") {
    auto st = SystemState::from_components(
        {"E"}, {0},
        {{{ModeSet::of({Mode::S, Mode::Tp})}, 1.0}, {{ModeSet::of({Mode::R, Mode::Tp})}, 1.0}});
    PulseEffect effect;
    auto out = apply_pulse(st, Pulse::single_pi(0, Mode::Tp, Mode::Rp), &effect);
    CHECK(effect.blockade_suppressed);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(out.amplitude_of({ModeSet::of({Mode::S, Mode::Rp})}) - inv_sqrt2) < 1e-12);
    CHECK(std::abs(out.amplitude_of({ModeSet::of({Mode::R, Mode::Tp})}) - inv_sqrt2) < 1e-12);
}

TEST_CASE("pulse with no coupled mode is the identity") {
    auto st = single_ensemble({Mode::T});
    PulseEffect effect;
    auto out = apply_pulse(st, Pulse::single_pi(0, Mode::S, Mode::R), &effect);
    CHECK(!effect.blockade_suppressed);
    CHECK(std::abs(out.amplitude_of({ModeSet::of({Mode::T})}) - 1.0) < 1e-12);
}

TEST_CASE("collective pulse is blocked by the other Rydberg mode") {
    auto st = single_ensemble({Mode::Rp});
    PulseEffect effect;
    auto out = apply_pulse(st, Pulse::collective_pi(0, Mode::R), &effect);
    CHECK(effect.blockade_suppressed);
    CHECK(std::abs(out.amplitude_of({ModeSet::of({Mode::Rp})}) - 1.0) < 1e-12);
}

TEST_CASE("blockade acts across co-located ensembles but not across sites") {
    auto make = [](int domain_b) {
        return SystemState::from_components(
            {"X", "Y"}, {0, domain_b},
            {{{ModeSet::of({Mode::R}), ModeSet::of({Mode::S})}, 1.0}});
    };
    PulseEffect effect;
    auto co_located = apply_pulse(make(0), Pulse::single_pi(1, Mode::S, Mode::R), &effect);
    CHECK(effect.blockade_suppressed);
    CHECK(std::abs(co_located.amplitude_of(
              {ModeSet::of({Mode::R}), ModeSet::of({Mode::S})}) - 1.0) < 1e-12);

    auto remote = apply_pulse(make(1), Pulse::single_pi(1, Mode::S, Mode::R), &effect);
    CHECK(!effect.blockade_suppressed);
    CHECK(std::abs(remote.amplitude_of(
              {ModeSet::of({Mode::R}), ModeSet::of({Mode::R})}) - 1.0) < 1e-12);
}

TEST_CASE("single-excitation pulse on a component holding both modes is ill-defined") {
    auto st = single_ensemble({Mode::S, Mode::T});
    CHECK_THROWS_AS(apply_pulse(st, Pulse::single_pi(0, Mode::S, Mode::T)), IllDefinedPulse);
}

TEST_CASE("malformed pulses are rejected") {
    SystemState ground({"E"}, {0});
    Pulse p = Pulse::collective_pi(0, Mode::R);
    p.to = Mode::S;
    CHECK_THROWS_AS(apply_pulse(ground, p), IllDefinedPulse);
    CHECK_THROWS_AS(apply_pulse(ground, Pulse::single_pi(0, Mode::S, Mode::S)),
                    IllDefinedPulse);
    CHECK_THROWS_AS(apply_pulse(ground, Pulse::single_pi(3, Mode::S, Mode::T)),
                    IllDefinedPulse);
}

TEST_CASE("pi pulse applied twice is the identity") {
    auto st = SystemState::from_components(
        {"E"}, {0},
        {{{ModeSet::of({Mode::S})}, 0.6}, {{ModeSet::of({Mode::T})}, 0.8}});
    auto once = apply_pulse(st, Pulse::single_pi(0, Mode::S, Mode::R));
    auto twice = apply_pulse(once, Pulse::single_pi(0, Mode::S, Mode::R));
    CHECK(fidelity(twice, st) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("computational measurement of a Bell pair collapses the partner") {
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    auto outcomes = enumerate_measurement(bell, 0, MeasureBasis::ComputationalST);
    REQUIRE(outcomes.size() == 2);
    for (const auto& o : outcomes) {
        CHECK(o.probability == doctest::Approx(0.5).epsilon(1e-12));
        Mode m = o.label == 's' ? Mode::S : Mode::T;
        CHECK(std::abs(o.collapsed.amplitude_of({ModeSet::of({m}), ModeSet::of({m})}) - 1.0) <
              1e-10);
    }
}

TEST_CASE("plus/minus measurement of |s> is unbiased") {
    auto st = single_ensemble({Mode::S});
    auto outcomes = enumerate_measurement(st, 0, MeasureBasis::PlusMinusST);
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(outcomes[1].probability == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Bell pair measured in plusminus x computational gives four equal outcomes") {
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    double total = 0.0;
    int count = 0;
    for (const auto& m1 : enumerate_measurement(bell, 0, MeasureBasis::PlusMinusST)) {
        for (const auto& m2 :
             enumerate_measurement(m1.collapsed, 1, MeasureBasis::ComputationalST)) {
            double joint = m1.probability * m2.probability;
            CHECK(joint == doctest::Approx(0.25).epsilon(1e-12));
            total += joint;
            ++count;
        }
    }
    CHECK(count == 4);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurement outside the qubit subspace is rejected") {
    CHECK_THROWS_AS(
        enumerate_measurement(single_ensemble({Mode::S, Mode::T}), 0,
                              MeasureBasis::ComputationalST),
        InvalidQubitSubspace);
    CHECK_THROWS_AS(
        enumerate_measurement(single_ensemble({Mode::Sp}), 0, MeasureBasis::PlusMinusST),
        InvalidQubitSubspace);
}

TEST_CASE("sampled measurement follows the seeded RNG deterministically") {
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    std::mt19937_64 rng1(1234), rng2(1234);
    for (int i = 0; i < 20; ++i) {
        auto a = sample_measurement(bell, 0, MeasureBasis::ComputationalST, rng1);
        auto b = sample_measurement(bell, 0, MeasureBasis::ComputationalST, rng2);
        CHECK(a.label == b.label);
    }
}

TEST_CASE("fidelity basics") {
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    CHECK(fidelity(bell, bell) == doctest::Approx(1.0).epsilon(1e-12));

    auto ss = SystemState::from_components(
        {"A", "B"}, {0, 1}, {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0}});
    auto tt = SystemState::from_components(
        {"A", "B"}, {0, 1}, {{{ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}, 1.0}});
    CHECK(fidelity(ss, tt) == doctest::Approx(0.0));
    CHECK(fidelity(ss, bell) == doctest::Approx(0.5).epsilon(1e-12));

    auto bell_minus = bell_ss_tt({"A", "B"}, {0, 1}, -1.0);
    CHECK(fidelity(bell, bell_minus) == doctest::Approx(0.0));

    auto other_layout = bell_ss_tt({"A", "C"}, {0, 1});
    CHECK_THROWS_AS((void)fidelity(bell, other_layout), LayoutMismatch);
}

TEST_CASE("restriction keeps the factor of a product state") {
    // (|ss> + |tt>)/sqrt(2) on (A,B), third ensemble in (|s>+|t>)/sqrt(2)
    auto st = SystemState::from_components(
        {"A", "B", "M"}, {0, 1, 2},
        {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::S}), ModeSet::of({Mode::S}), ModeSet::of({Mode::T})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::T}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}, 1.0}});
    auto restricted = restrict_to(st, {0, 1});
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    CHECK(fidelity(restricted, bell) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("restriction rejects entangled splits") {
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    CHECK_THROWS_AS(restrict_to(bell, {0}), NotAProductState);
}

TEST_CASE("debug dump is deterministic and lexicographically ordered") {
    auto bell = bell_ss_tt({"A", "B"}, {0, 1});
    auto dump1 = debug_dump_json(bell);
    auto dump2 = debug_dump_json(bell);
    CHECK(dump1 == dump2);
    CHECK(dump1 ==
          "[{\"component\":[[\"s\"],[\"s\"]],\"re\":0.7071067811865476,\"im\":0.0},"
          "{\"component\":[[\"t\"],[\"t\"]],\"re\":0.7071067811865476,\"im\":0.0}]");
}

TEST_CASE("pruning below 1e-12 leaves measurement probabilities intact") {
    double eps = 5e-13;
    auto big = SystemState::from_components(
        {"E"}, {0},
        {{{ModeSet::of({Mode::S})}, 1.0}, {{ModeSet::of({Mode::T})}, eps}});
    // the tiny component is pruned away by the builder
    CHECK(big.component_count() == 1);
    auto outcomes = enumerate_measurement(big, 0, MeasureBasis::ComputationalST);
    REQUIRE(outcomes.size() == 1);
    CHECK(std::abs(outcomes[0].probability - 1.0) < 1e-10);
}

namespace {

// Random legal pulse streams over random layouts; used for the unitarity and
// blockade-safety properties.
Pulse random_legal_pulse(const SystemState& st, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> ens_dist(0, int(st.num_ensembles()) - 1);
    std::uniform_int_distribution<int> mode_dist(0, kModeCount - 1);
    std::uniform_int_distribution<int> kind_dist(0, 4);
    for (;;) {
        std::size_t target = std::size_t(ens_dist(rng));
        int kind = kind_dist(rng);
        if (kind == 0) {
            return Pulse::collective_pi(target, mode_dist(rng) % 2 == 0 ? Mode::R : Mode::Rp);
        }
        Mode a = Mode(mode_dist(rng));
        Mode b = Mode(mode_dist(rng));
        if (a == b) continue;
        bool conflict = false;
        for (const auto& [sets, amp] : st.components()) {
            if (sets[target].has(a) && sets[target].has(b)) {
                conflict = true;
                break;
            }
        }
        if (conflict) continue;
        return kind < 3 ? Pulse::single_pi(target, a, b) : Pulse::single_half_pi(target, a, b);
    }
}

int max_rydberg_in_domain(const SystemState& st) {
    int worst = 0;
    for (const auto& [sets, amp] : st.components()) {
        std::map<int, int> per_domain;
        for (std::size_t e = 0; e < sets.size(); ++e) {
            per_domain[st.domain_of(e)] += sets[e].rydberg_count();
        }
        for (const auto& [d, n] : per_domain) worst = std::max(worst, n);
    }
    return worst;
}

}  // namespace

TEST_CASE("property: norm preservation and blockade safety on random pulse streams") {
    std::mt19937_64 rng(20260810);
    int states_checked = 0;
    for (int seq = 0; seq < 100; ++seq) {
        std::uniform_int_distribution<int> n_dist(1, 3);
        int n = n_dist(rng);
        std::vector<std::string> names;
        std::vector<int> domains;
        std::uniform_int_distribution<int> dom_dist(0, std::max(0, n - 2));
        for (int i = 0; i < n; ++i) {
            names.push_back("E" + std::to_string(i));
            domains.push_back(n == 1 ? 0 : dom_dist(rng));
        }
        SystemState st(names, domains);
        for (int step = 0; step < 10; ++step) {
            st = apply_pulse(st, random_legal_pulse(st, rng));
            CHECK(std::abs(st.norm_squared() - 1.0) < 1e-12);
            CHECK(max_rydberg_in_domain(st) <= 1);
            ++states_checked;
        }
    }
    CHECK(states_checked == 1000);
}
