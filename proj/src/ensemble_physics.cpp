#include "rydberg/ensemble_physics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "rydberg/optimize.hpp"

namespace rydberg {

namespace {
constexpr double kUmPerAu = kBohrRadiusNm * 1e-3;
}

double um_to_au(double r_um) { return r_um / kUmPerAu; }
double au_to_um(double r_au) { return r_au * kUmPerAu; }

void PhysicsParams::validate() const {
    if (n_principal < 1.0) throw std::invalid_argument("principal quantum number must be >= 1");
    if (finesse <= 0.0 || w0_um <= 0.0 || k_per_um <= 0.0) {
        throw std::invalid_argument("finesse, waist and wavenumber must be positive");
    }
    if (c_r <= 0.0 || c_r > 1.0) throw std::invalid_argument("c_r must be in (0,1]");
    if (n_atoms < 0.0) throw std::invalid_argument("atom number must be non-negative");
    if (delta_dd_mhz <= 0.0) throw std::invalid_argument("Delta_dd must be positive");
    if (c1 == 0.0 || c1_prime == 0.0) throw std::invalid_argument("vdW coefficients must be nonzero");
}

double vdw_potential_au(double r_au, const PhysicsParams& p) {
    p.validate();
    if (r_au <= 0.0) throw std::invalid_argument("separation must be positive");
    double n12 = std::pow(p.n_principal, 12.0);
    double n16 = std::pow(p.n_principal, 16.0);
    double r6 = std::pow(r_au, 6.0);
    double r8 = std::pow(r_au, 8.0);
    if (p.verbatim_signs) {
        return -p.c1 * n12 / r6 + p.c1_prime * n16 / r8;
    }
    // repulsive r^-6 branch, attractive r^-8 branch
    return std::abs(p.c1) * n12 / r6 - std::abs(p.c1_prime) * n16 / r8;
}

double vdw_potential_mhz(double r_um, const PhysicsParams& p) {
    return vdw_potential_au(um_to_au(r_um), p) * kHartreeHz / 1e6;
}

double critical_distance_um(const PhysicsParams& p) {
    p.validate();
    if (p.verbatim_signs && p.c1 < 0.0 && p.c1_prime > 0.0) {
        throw NoExtremum("verbatim signs make both branches repulsive; no maximum exists");
    }
    double ratio = std::abs(p.c1_prime / p.c1);
    double r_au = p.n_principal * p.n_principal * std::sqrt(4.0 / 3.0 * ratio);
    return au_to_um(r_au);
}

double critical_distance_numeric_um(const PhysicsParams& p) {
    p.validate();
    if (p.verbatim_signs && p.c1 < 0.0 && p.c1_prime > 0.0) {
        throw NoExtremum("verbatim signs make both branches repulsive; no maximum exists");
    }
    double n2 = p.n_principal * p.n_principal;
    auto neg_v = [&](double r_au) { return -vdw_potential_au(r_au, p); };
    double r_au = minimize_positive(neg_v, 0.01 * n2, 100.0 * n2, 1e-12);
    return au_to_um(r_au);
}

double critical_density_cm3(const PhysicsParams& p) {
    double r_c_um = critical_distance_um(p);
    double per_um3 = 1.0 / (r_c_um * r_c_um * r_c_um);
    return per_um3 * 1e12;  // um^-3 -> cm^-3
}

double blockade_radius_um(const PhysicsParams& p) {
    p.validate();
    double delta_au = p.delta_dd_mhz * 1e6 * p.mhz_to_energy_factor / kHartreeHz;
    double r_au = std::pow(std::abs(p.c1) * std::pow(p.n_principal, 12.0) / delta_au,
                           1.0 / 6.0);
    return au_to_um(r_au);
}

double cooperativity(const PhysicsParams& p) {
    p.validate();
    return p.n_atoms * p.c_r * p.c_r * 24.0 * p.finesse /
           (2.0 * std::numbers::pi * p.k_per_um * p.k_per_um * p.w0_um * p.w0_um);
}

double retrieval_efficiency(const PhysicsParams& p) {
    double c = cooperativity(p);
    return c / (c + 1.0);
}

EnsembleReport ensemble_report(const PhysicsParams& p, double working_density_cm3,
                               double box_side_um, double tau_s,
                               AngularConvention error_convention) {
    if (working_density_cm3 <= 0.0 || box_side_um <= 0.0 || tau_s <= 0.0) {
        throw std::invalid_argument("density, box side and tau must be positive");
    }
    EnsembleReport rep;
    rep.r_c_um = critical_distance_um(p);
    rep.density_bound_cm3 = critical_density_cm3(p);
    rep.blockade_radius_um = blockade_radius_um(p);
    rep.working_density_cm3 = working_density_cm3;
    rep.box_side_um = box_side_um;
    rep.n_atoms = working_density_cm3 * 1e-12 * box_side_um * box_side_um * box_side_um;
    rep.delta_dd_mhz = p.delta_dd_mhz;
    rep.tau_s = tau_s;

    PhysicsParams with_n = p;
    with_n.n_atoms = rep.n_atoms;
    rep.cooperativity = cooperativity(with_n);
    rep.eta_r = retrieval_efficiency(with_n);

    double delta_rad_s = delta_dd_rad_s_from_mhz(p.delta_dd_mhz, error_convention);
    rep.e_loc_min = optimize_rabi(tau_s, delta_rad_s, RabiObjective::LocEqualOmegas).error;
    rep.e_cnot_min = optimize_rabi(tau_s, delta_rad_s, RabiObjective::Cnot).error;

    rep.blockade_feasible = box_side_um <= rep.blockade_radius_um;
    rep.density_feasible = working_density_cm3 <= rep.density_bound_cm3;

    char buf[160];
    if (!rep.blockade_feasible) {
        std::snprintf(buf, sizeof buf,
                      "ensemble diameter %.2f um exceeds the blockade radius %.2f um",
                      box_side_um, rep.blockade_radius_um);
        rep.warnings.emplace_back(buf);
    }
    if (!rep.density_feasible) {
        std::snprintf(buf, sizeof buf,
                      "working density %.3g cm^-3 exceeds the repulsive-branch bound %.3g cm^-3",
                      working_density_cm3, rep.density_bound_cm3);
        rep.warnings.emplace_back(buf);
    }
    if (collective_pulse_imprecision(std::max(1.0, rep.n_atoms)) > 0.01) {
        std::snprintf(buf, sizeof buf,
                      "N = %.0f atoms gives collective-pulse imprecision above 1%%",
                      rep.n_atoms);
        rep.warnings.emplace_back(buf);
    }
    return rep;
}

}  // namespace rydberg
