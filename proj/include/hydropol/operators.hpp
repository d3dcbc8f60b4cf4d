#pragma once

#include <Eigen/Dense>
#include <array>

#include "hydropol/hydrogen.hpp"

namespace hydropol {

// Spherical components (q = -1, 0, +1) of a real 3-vector:
// v_0 = v_z, v_{+1} = -(v_x + i v_y)/sqrt(2), v_{-1} = (v_x - i v_y)/sqrt(2).
std::array<std::complex<double>, 3> spherical_components(const Eigen::Vector3d& v);

// Per-shell Hamiltonians in the coupled |L (S) J M> basis, in rad/s.
// Matrix elements are built by expanding the coupled states over the
// uncoupled |L mL>|S mS> product basis, where the operators are elementary.

// Fine-structure offsets (plus the optional 2S shift): diagonal.
Eigen::MatrixXcd free_hamiltonian(const LevelScheme& scheme, int shell);

// -(e0/hbar) E . r restricted to the shell; couples |dL| = 1 terms.
Eigen::MatrixXcd stark_hamiltonian(const LevelScheme& scheme, const TransitionTable& table,
                                   int shell, const Eigen::Vector3d& e_field_vm);

// (mu_B/hbar) B . (J + S); diagonal in L, mixes J and J +/- 1 for transverse
// components.
Eigen::MatrixXcd zeeman_hamiltonian(const LevelScheme& scheme, int shell,
                                    const Eigen::Vector3d& b_field_tesla);

// Dimensionless dipole amplitude blocks <f| r_q / a0 |u> of a line, lower
// shell rows by upper shell columns, indexed q + 1.
std::array<Eigen::MatrixXcd, 3> dipole_blocks(const LevelScheme& scheme,
                                              const TransitionTable& table, LineId line);

// omega^3 e0^2 a0^2 / (3 pi eps0 hbar c^3): the rate scale multiplying the
// squared dimensionless amplitudes; A(u->l) = kappa * sum_{f,q} |T_q(f,u)|^2.
double line_rate_scale(double omega);

}  // namespace hydropol
