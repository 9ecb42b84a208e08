#include "rydberg/error_model.hpp"

#include <cmath>

namespace rydberg {

namespace {
constexpr double kPi = std::numbers::pi;
}

double delta_dd_rad_s_from_mhz(double mhz, AngularConvention conv) {
    if (mhz <= 0.0) throw std::invalid_argument("Delta_dd must be positive");
    double factor = conv == AngularConvention::TwoPi ? 2.0 * kPi : 1.0;
    return factor * mhz * 1e6;
}

void ErrorParams::validate() const {
    if (tau <= 0.0 || omega_n <= 0.0 || omega_s <= 0.0 || delta_dd <= 0.0) {
        throw std::invalid_argument("tau, Omega_N, Omega_s and Delta_dd must be positive");
    }
    if (n_atoms < 1.0) throw std::invalid_argument("atom number must be >= 1");
}

double e_loc(const ErrorParams& p) {
    p.validate();
    double g = p.gamma();
    double d2 = p.delta_dd * p.delta_dd;
    return 2.0 * g * kPi / p.omega_n + g * kPi / p.omega_s +
           4.0 * p.omega_n * p.omega_n / d2 + 2.0 * p.omega_s * p.omega_s / d2;
}

double e_cnot(const ErrorParams& p) {
    p.validate();
    double g = p.gamma();
    double d2 = p.delta_dd * p.delta_dd;
    return 2.0 * g * kPi / p.omega_s + 1.5 * p.omega_s * p.omega_s / d2;
}

RabiCoefficients rabi_coefficients(double tau, double delta_dd, RabiObjective which) {
    if (tau <= 0.0 || delta_dd <= 0.0) {
        throw std::invalid_argument("tau and Delta_dd must be positive");
    }
    double gamma_pi = kPi / (2.0 * kPi * tau);  // gamma * pi = 1/(2 tau)
    double d2 = delta_dd * delta_dd;
    if (which == RabiObjective::LocEqualOmegas) {
        return {3.0 * gamma_pi, 6.0 / d2};
    }
    return {2.0 * gamma_pi, 1.5 / d2};
}

RabiOptimum optimize_rabi(double tau, double delta_dd, RabiObjective which) {
    auto [a, b] = rabi_coefficients(tau, delta_dd, which);
    double omega = std::cbrt(a / (2.0 * b));
    double error = 3.0 * std::cbrt(a * a * b / 4.0);
    return {omega, error};
}

double collective_pulse_imprecision(double n_atoms) {
    if (n_atoms < 1.0) throw std::invalid_argument("atom number must be >= 1");
    return 1.0 / n_atoms;
}

LeakProbs excitation_leak_probs(const ErrorParams& p, double p1_multiplier,
                                double p0_multiplier) {
    p.validate();
    double rn = p.omega_n / p.delta_dd;
    double rs = p.omega_s / p.delta_dd;
    return {p1_multiplier * rn * rn, p0_multiplier * rs * rs};
}

}  // namespace rydberg
