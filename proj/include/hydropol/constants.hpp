#pragma once

namespace hydropol::constants {

// CODATA 2018, SI units. Infinite nuclear mass is assumed throughout
// (standard Bohr radius and Rydberg energy).
inline constexpr double e0 = 1.602176634e-19;        // elementary charge, C
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double hbar = h_planck / 6.283185307179586476925286766559;  // h / 2 pi
inline constexpr double c_light = 299792458.0;       // m / s
inline constexpr double k_boltzmann = 1.380649e-23;  // J / K
inline constexpr double a0 = 5.29177210903e-11;      // Bohr radius, m
inline constexpr double mu_bohr = 9.2740100783e-24;  // Bohr magneton, J / T
inline constexpr double eps0 = 8.8541878128e-12;     // vacuum permittivity, F / m
inline constexpr double m_electron = 9.1093837015e-31;  // kg
inline constexpr double alpha_fs = 7.2973525693e-3;  // fine-structure constant
inline constexpr double rydberg = 2.1798723611035e-18;  // hc R_inf, J

// omega_E = (a0 e0 / hbar) * E  for E in V/m
inline constexpr double omega_e_per_vm = a0 * e0 / hbar;
// omega_B = (mu_B / hbar) * B   for B in tesla
inline constexpr double omega_b_per_tesla = mu_bohr / hbar;

inline constexpr double gauss_to_tesla = 1e-4;
inline constexpr double vcm_to_vm = 100.0;

}  // namespace hydropol::constants
