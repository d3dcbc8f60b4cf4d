#pragma once

#include <utility>

#include "hydropol/radiation.hpp"

namespace hydropol {

// Radiative rates of the restricted 1S/2S/2P/3P model. R<ij> is the rate from
// Bohr level i to j: downward rates include stimulated emission, upward ones
// are absorption rates per lower state.
struct ToyRates {
    double r12 = 0.0, r13 = 0.0, r21 = 0.0, r23 = 0.0, r31 = 0.0, r32 = 0.0;
};

struct ToySolution {
    double n_1s = 0.0, n_2s = 0.0, n_2p = 0.0, n_3p = 0.0;
    double a_2p = 0.0;    // alignment of the 2P term
    double c_2s2p = 0.0;  // imaginary part of the 2S-2P orientation coherence
    double imbalance = 0.0;  // N_2P - 3 N_2S, formed before output rounding
    double omega_e = 0.0;
    double residual = 0.0;  // worst residual of the six balance equations
};

// Stationary solution of the six-equation restricted model; the 3P balance is
// replaced by total population conservation and kept as a residual check.
ToySolution toy_solve(const ToyRates& r, double omega_e);

// Closed-form (a_2P, c_2S2P) from the populations of a consistent solution.
std::pair<double, double> toy_closed_form(const ToyRates& r, double n_2s, double n_2p,
                                          double omega_e);
// Same, fed with the solution's well-conditioned population imbalance.
std::pair<double, double> toy_closed_form(const ToyRates& r, const ToySolution& s);

// R12 R23 R31 - 3 R13 R32 R21. Zero iff electric alignment is impossible in
// the restricted model (two-term configurations, TE illumination).
double two_term_factor(const ToyRates& r);

// Rates of the minimal pumping set (Lyman-alpha, Lyman-beta, and the 2S-3P
// component of Balmer-alpha) for the given illumination.
ToyRates toy_rates_from(const Illumination& ill);

}  // namespace hydropol
