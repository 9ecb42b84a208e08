#include "doctest.h"

#include <cmath>
#include <random>

#include "rydberg/link_state.hpp"
#include "rydberg/pulse_protocols.hpp"

using namespace rydberg;

namespace {

SystemState basis_pair(Mode c, Mode t) {
    return SystemState::from_components({"Bu", "Bd"}, {0, 0},
                                        {{{ModeSet::of({c}), ModeSet::of({t})}, 1.0}});
}

}  // namespace

TEST_CASE("bell generation hits the golden state exactly") {
    SystemState ground({"E"}, {0});
    auto out = bell_generation(ground);
    CHECK(fidelity(out, bell_generation_reference(ground)) >
          1.0 - 1e-10);
}

TEST_CASE("bell generation pulse list matches the documented sequence") {
    auto script = bell_generation_script(0);
    REQUIRE(script.pulses.size() == 8);
    auto expect = [&](std::size_t i, Pulse::Kind kind, Pulse::Angle angle, Mode to) {
        CHECK(script.pulses[i].kind == kind);
        CHECK(script.pulses[i].angle == angle);
        CHECK(script.pulses[i].to == to);
    };
    expect(0, Pulse::Kind::CollectiveGroundToRydberg, Pulse::Angle::Pi, Mode::R);
    expect(1, Pulse::Kind::SingleExcitation, Pulse::Angle::Pi, Mode::S);
    expect(2, Pulse::Kind::CollectiveGroundToRydberg, Pulse::Angle::Pi, Mode::R);
    expect(3, Pulse::Kind::SingleExcitation, Pulse::Angle::Pi, Mode::Tp);
    expect(4, Pulse::Kind::SingleExcitation, Pulse::Angle::HalfPi, Mode::R);
    expect(5, Pulse::Kind::SingleExcitation, Pulse::Angle::Pi, Mode::Rp);
    expect(6, Pulse::Kind::SingleExcitation, Pulse::Angle::Pi, Mode::Sp);
    expect(7, Pulse::Kind::SingleExcitation, Pulse::Angle::Pi, Mode::T);
}

TEST_CASE("bell generation intermediate after the blockade step") {
    SystemState ground({"E"}, {0});
    auto pulses = bell_generation_script(0).pulses;
    auto trace = run_with_trace(ground, pulses);
    CHECK(trace.steps[5].suppressed);  // the (t',r') transfer blocks on the r branch
    auto intermediate = SystemState::from_components(
        {"E"}, {0},
        {{{ModeSet::of({Mode::S, Mode::Rp})}, 1.0}, {{ModeSet::of({Mode::R, Mode::Tp})}, 1.0}});
    SystemState after_step6 = ground;
    for (int i = 0; i < 6; ++i) after_step6 = apply_pulse(after_step6, pulses[i]);
    CHECK(fidelity(after_step6, intermediate) > 1.0 - 1e-10);
}

TEST_CASE("bell generation on a non-empty ensemble surfaces as IllDefinedPulse") {
    auto occupied = SystemState::from_components({"E"}, {0}, {{{ModeSet::of({Mode::S})}, 1.0}});
    CHECK_THROWS_AS(bell_generation(occupied), IllDefinedPulse);
}

TEST_CASE("cnot truth table reproduces all four rows and blockade markers") {
    auto rows = cnot_truth_table();
    REQUIRE(rows.size() == 4);

    CHECK(rows[0].input == "ss");
    CHECK(rows[0].states == std::vector<std::string>{"r s", "r s", "r s", "r s", "s s"});
    CHECK(rows[0].suppressed == std::vector<bool>{false, true, false, true, false});

    CHECK(rows[1].input == "st");
    CHECK(rows[1].states == std::vector<std::string>{"r t", "r t", "r t", "r t", "s t"});
    CHECK(rows[1].suppressed == std::vector<bool>{false, false, true, false, false});

    CHECK(rows[2].input == "ts");
    CHECK(rows[2].states == std::vector<std::string>{"t s", "t r", "t t", "t t", "t t"});
    CHECK(rows[2].suppressed == std::vector<bool>{false, false, false, false, false});

    CHECK(rows[3].input == "tt");
    CHECK(rows[3].states == std::vector<std::string>{"t t", "t t", "t r", "t s", "t s"});
    CHECK(rows[3].suppressed == std::vector<bool>{false, false, false, false, false});
}

TEST_CASE("cnot extracted as a 4x4 matrix is the s/t-encoded CNOT permutation") {
    // basis order: ss, st, ts, tt; expected action ss,st,tt,ts
    const Mode modes[2] = {Mode::S, Mode::T};
    double matrix[4][4] = {};
    for (int in = 0; in < 4; ++in) {
        auto out = cnot_sequence(basis_pair(modes[in / 2], modes[in % 2]), 0, 1);
        for (int o = 0; o < 4; ++o) {
            auto amp = out.amplitude_of(
                {ModeSet::of({modes[o / 2]}), ModeSet::of({modes[o % 2]})});
            matrix[o][in] = amp.real();
            CHECK(std::abs(amp.imag()) < 1e-12);
        }
    }
    const double expected[4][4] = {
        {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            CHECK(matrix[r][c] == doctest::Approx(expected[r][c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("cnot extends linearly to superpositions") {
    auto in = SystemState::from_components(
        {"Bu", "Bd"}, {0, 0},
        {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::T})}, 1.0}});
    auto out = cnot_sequence(in, 0, 1);
    auto expected = SystemState::from_components(
        {"Bu", "Bd"}, {0, 0},
        {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0},
         {{ModeSet::of({Mode::T}), ModeSet::of({Mode::S})}, 1.0}});
    CHECK(fidelity(out, expected) > 1.0 - 1e-10);
}

TEST_CASE("cnot applied twice is the identity on the qubit subspace") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<std::pair<std::vector<ModeSet>, Amplitude>> comps;
        for (Mode c : {Mode::S, Mode::T}) {
            for (Mode t : {Mode::S, Mode::T}) {
                comps.push_back({{ModeSet::of({c}), ModeSet::of({t})},
                                 Amplitude(dist(rng), dist(rng))});
            }
        }
        auto st = SystemState::from_components({"Bu", "Bd"}, {0, 0}, comps);
        auto twice = cnot_sequence(cnot_sequence(st, 0, 1), 0, 1);
        CHECK(fidelity(twice, st) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cnot refuses ensembles in different blockade domains") {
    auto st = SystemState::from_components(
        {"Bu", "Bd"}, {0, 1}, {{{ModeSet::of({Mode::S}), ModeSet::of({Mode::S})}, 1.0}});
    CHECK_THROWS_AS(cnot_sequence(st, 0, 1), NotCoLocated);
}

TEST_CASE("swap produces a perfect A-C Bell pair for every outcome") {
    auto outcomes = swap_protocol_enumerate(make_swap_input());
    REQUIRE(outcomes.size() == 4);
    auto target = swap_target_reference();
    double total = 0.0;
    for (const auto& o : outcomes) {
        CHECK(o.probability == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(fidelity(o.ac_state, target) > 1.0 - 1e-10);
        total += o.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("swap correction table is exposed in the script") {
    auto script = swap_script();
    REQUIRE(script.corrections.size() == 4);
    CHECK(script.corrections.at("+s").empty());
    CHECK(script.corrections.at("+t").size() == 1);
    CHECK(script.corrections.at("-s").size() == 3);
    CHECK(script.corrections.at("-t").size() == 2);
    CHECK(script.measurements.size() == 2);
}

TEST_CASE("sampled swap is deterministic under a fixed seed") {
    std::mt19937_64 rng1(31337), rng2(31337);
    auto input = make_swap_input();
    for (int i = 0; i < 8; ++i) {
        auto a = swap_protocol_sample(input, rng1);
        auto b = swap_protocol_sample(input, rng2);
        CHECK(a.outcome == b.outcome);
        CHECK(fidelity(a.ac_state, swap_target_reference()) > 1.0 - 1e-10);
    }
}

TEST_CASE("purification circuit matches the closed form on the fidelity grid") {
    for (double f : {0.6, 0.7, 0.8, 0.9, 0.95}) {
        auto stats = purify_circuit_enumerate(f, PairForm::PhiMix);
        double parity = f * f + (1 - f) * (1 - f);
        CHECK(stats.kept_probability == doctest::Approx(parity).epsilon(1e-12));
        CHECK(stats.kept_fidelity == doctest::Approx(f * f / parity).epsilon(1e-12));
    }
}

TEST_CASE("purification works identically on the psi-form mixture, skipping the basis change") {
    for (double f : {0.7, 0.9}) {
        auto phi = purify_circuit_enumerate(f, PairForm::PhiMix);
        auto psi = purify_circuit_enumerate(f, PairForm::PsiMix);
        CHECK(phi.kept_probability == doctest::Approx(psi.kept_probability).epsilon(1e-12));
        CHECK(phi.kept_fidelity == doctest::Approx(psi.kept_fidelity).epsilon(1e-12));
    }
}

TEST_CASE("purification trivial and fixed-point cases") {
    auto pure = purify_circuit_enumerate(1.0, PairForm::PhiMix);
    CHECK(pure.kept_probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pure.kept_fidelity == doctest::Approx(1.0).epsilon(1e-12));

    auto half = purify_circuit_enumerate(0.5, PairForm::PhiMix);
    CHECK(half.kept_probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half.kept_fidelity == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("purification circuit agrees with the analytic update at ideal gates") {
    for (double f : {0.6, 0.7, 0.8, 0.9, 0.95}) {
        auto circuit = purify_circuit_enumerate(f, PairForm::PhiMix);
        auto analytic = purify_update({f, 0.0, 0.0, PairForm::PhiMix}, 1.0, 1.0);
        CHECK(circuit.kept_fidelity ==
              doctest::Approx(analytic.state.fidelity).epsilon(1e-12));
        CHECK(circuit.kept_probability ==
              doctest::Approx(analytic.success_prob).epsilon(1e-12));
    }
}

TEST_CASE("sampled purification keeps only equal outcomes and is seed-deterministic") {
    std::mt19937_64 rng1(777), rng2(777);
    int kept = 0;
    for (int i = 0; i < 50; ++i) {
        auto a = purify_circuit_sample(0.8, PairForm::PhiMix, rng1);
        auto b = purify_circuit_sample(0.8, PairForm::PhiMix, rng2);
        CHECK(a.kept == b.kept);
        CHECK(a.outcome == b.outcome);
        CHECK(a.kept == (a.outcome[0] == a.outcome[1]));
        kept += a.kept;
    }
    CHECK(kept > 15);  // kept probability is 0.68 at F = 0.8
}
