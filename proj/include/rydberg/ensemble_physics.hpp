#pragma once

// Atomic-physics parameter calculators: the two-term van der Waals potential,
// its critical distance and the implied density bound, the blockade radius,
// cavity cooperativity and retrieval efficiency.
//
// Internally everything runs in atomic units (Bohr radii, Hartree) with
// micrometer/MHz conversions at the interface.
//
// Sign handling: the quoted coefficients (c1 = -0.85, c1' = 0.8) inserted
// verbatim into V = -c1 n^12/r^6 + c1' n^16/r^8 make both terms repulsive and
// admit no maximum. The default interpretation keeps the r^-6 branch
// repulsive and flips the r^-8 branch attractive, which restores the
// documented large-r/small-r behavior and the critical distance; the verbatim
// variant stays available behind a flag.

#include <stdexcept>
#include <string>
#include <vector>

#include "rydberg/error_model.hpp"

namespace rydberg {

inline constexpr double kBohrRadiusNm = 0.0529177;    // nm per Bohr radius
inline constexpr double kHartreeHz = 6.579684e15;     // Hz per Hartree

double um_to_au(double r_um);
double au_to_um(double r_au);

struct NoExtremum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhysicsParams {
    double n_principal = 70.0;
    double c1 = -0.85;      // r^-6 van der Waals coefficient, atomic units
    double c1_prime = 0.8;  // r^-8 coefficient, atomic units
    double k_per_um = 6.283185307179586;  // photon wavenumber, rad/um (2 pi/um)
    double w0_um = 5.0;                   // cavity mode waist
    double finesse = 100.0;
    double c_r = 1.0 / 3.0;  // transition coefficient
    double n_atoms = 240.0;
    double delta_dd_mhz = 20.0;  // target blockade shift
    bool verbatim_signs = false;
    // MHz -> energy conversion: energy/h = factor * MHz. Factor 1 reads the
    // quoted shift as an ordinary frequency; 2 pi reads it as angular.
    double mhz_to_energy_factor = 1.0;

    void validate() const;
};

// Interaction energy at separation r, as a frequency in MHz (E/h).
double vdw_potential_mhz(double r_um, const PhysicsParams& p);
double vdw_potential_au(double r_au, const PhysicsParams& p);

// Closed form from dV/dr = 0: r_c = n^2 sqrt((4/3)|c1'/c1|).
double critical_distance_um(const PhysicsParams& p);
// Independent route: golden-section maximization of the potential.
double critical_distance_numeric_um(const PhysicsParams& p);

// Maximum usable density 1/r_c^3, in cm^-3.
double critical_density_cm3(const PhysicsParams& p);

// R_b = (|c1| n^12 / Delta_dd)^(1/6).
double blockade_radius_um(const PhysicsParams& p);

// C = N c_r^2 24 F / (2 pi k^2 w0^2), eta_r = C/(C+1).
double cooperativity(const PhysicsParams& p);
double retrieval_efficiency(const PhysicsParams& p);

struct EnsembleReport {
    double r_c_um = 0.0;
    double density_bound_cm3 = 0.0;
    double blockade_radius_um = 0.0;
    double working_density_cm3 = 0.0;
    double box_side_um = 0.0;
    double n_atoms = 0.0;  // working density x box volume
    double cooperativity = 0.0;
    double eta_r = 0.0;
    double delta_dd_mhz = 0.0;
    double tau_s = 0.0;
    double e_loc_min = 0.0;
    double e_cnot_min = 0.0;
    bool blockade_feasible = true;  // box side within the blockade radius
    bool density_feasible = true;   // working density below the bound
    std::vector<std::string> warnings;
};

// One consistency report bundling the calculators with the error-model minima
// at the configured shift.
EnsembleReport ensemble_report(const PhysicsParams& p, double working_density_cm3,
                               double box_side_um, double tau_s,
                               AngularConvention error_convention = AngularConvention::TwoPi);

}  // namespace rydberg
