#pragma once

// Closed-form intrinsic-error estimates for local entanglement generation and
// the two-ensemble CNOT gate, with the minimization over Rabi frequencies.
//
// Units: Omega and Delta_dd are angular frequencies in rad/s; the decay rate
// follows the tau = 1/(2 pi gamma) definition. Megahertz inputs are converted
// through a configurable factor (default 2 pi, i.e. MHz values are read as
// ordinary frequencies and turned into angular ones).

#include <numbers>
#include <stdexcept>

namespace rydberg {

enum class AngularConvention { TwoPi, One };

double delta_dd_rad_s_from_mhz(double mhz, AngularConvention conv = AngularConvention::TwoPi);

struct ErrorParams {
    double tau = 300e-6;      // Rydberg lifetime, s
    double omega_n = 1e6;     // collective Rabi frequency, rad/s
    double omega_s = 1e6;     // single-atom Rabi frequency, rad/s
    double delta_dd = 1.2e8;  // Rydberg interaction shift, rad/s
    double n_atoms = 240.0;

    double gamma() const { return 1.0 / (2.0 * std::numbers::pi * tau); }
    void validate() const;
};

// E_loc = 2 gamma pi / Omega_N + gamma pi / Omega_s
//         + 4 Omega_N^2 / Delta^2 + 2 Omega_s^2 / Delta^2
double e_loc(const ErrorParams& p);

// E_cnot = 2 gamma pi / Omega_s + 3 Omega_s^2 / (2 Delta^2)
double e_cnot(const ErrorParams& p);

enum class RabiObjective {
    LocEqualOmegas,  // E_loc with Omega_N = Omega_s
    Cnot,
};

struct RabiOptimum {
    double omega = 0.0;  // rad/s
    double error = 0.0;
};

// Closed-form minimizer of f(Omega) = A/Omega + B Omega^2:
// Omega* = (A/(2B))^(1/3), f(Omega*) = 3 (A^2 B / 4)^(1/3).
RabiOptimum optimize_rabi(double tau, double delta_dd, RabiObjective which);

// Coefficients of the A/Omega + B Omega^2 form for each objective; exposed so
// an independent numerical minimizer can cross-check the closed form.
struct RabiCoefficients {
    double a = 0.0;
    double b = 0.0;
};
RabiCoefficients rabi_coefficients(double tau, double delta_dd, RabiObjective which);

// 1/N collective pi-pulse imprecision for an atom-number uncertainty sqrt(N).
double collective_pulse_imprecision(double n_atoms);

struct LeakProbs {
    double p1 = 0.0;  // erroneous single excitation, (Omega_N/Delta)^2
    double p0 = 0.0;  // vacuum contribution, (Omega_s/Delta)^2
};
LeakProbs excitation_leak_probs(const ErrorParams& p, double p1_multiplier = 1.0,
                                double p0_multiplier = 1.0);

}  // namespace rydberg
