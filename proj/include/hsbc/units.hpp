#pragma once

#include <numbers>

namespace hsbc {

inline constexpr double pi = std::numbers::pi;

namespace codata {
// 2018 CODATA exact / recommended values, SI
inline constexpr double avogadro = 6.02214076e23;          // 1/mol
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
} // namespace codata

/// N_L e0^2 / (8 pi eps0) in kJ*Angstrom/mol (about 694.68).
inline constexpr double born_constant =
    codata::avogadro * codata::elementary_charge * codata::elementary_charge /
    (8.0 * pi * codata::vacuum_permittivity) * 1.0e10 / 1.0e3;

inline constexpr double kelvin_offset = 273.15;

/// Unit conventions shared by every energy formula: energies in kJ/mol,
/// lengths in Angstrom, charges in units of e0. Surface charges are in the
/// reduced units of the boundary-integral equations, where the Green's
/// function is 1/(4 pi r); the prefactor C = N_L/(eps0 eps_in) is folded into
/// `born_constant`.
struct UnitSystem {
    double born_constant = hsbc::born_constant;
    double eps_in = 1.0;
};

} // namespace hsbc
