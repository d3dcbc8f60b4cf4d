#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydropol/half_integer.hpp"

namespace hydropol {

// An nL term of hydrogen (S = 1/2 implicit when fine structure is on).
struct Term {
    int n = 0;
    int L = 0;
    friend constexpr auto operator<=>(const Term&, const Term&) = default;
    std::string label() const;  // e.g. "2P"
};

std::optional<Term> parse_term(const std::string& label);

struct State {
    int n = 0;
    int L = 0;
    HalfInt J;
    HalfInt M;
    Term term() const { return {n, L}; }
};

struct SchemeOptions {
    // Extra energy (rad/s) added to the 2S_1/2 level; 0 reproduces the exact
    // 2S_1/2 - 2P_1/2 degeneracy of the Dirac spectrum.
    double lamb_shift_2s = 0.0;
    // Restrict the scheme to these terms (used by the reduced models).
    std::optional<std::vector<Term>> term_filter;
};

// Enumeration of hydrogen states up to n_max. With fine structure the basis is
// |n L J M> with S = 1/2 (2n^2 states per shell); without it the basis is the
// spinless |n L M_L> (n^2 states per shell) and J stands for L.
class LevelScheme {
public:
    LevelScheme(int n_max, bool fine_structure, SchemeOptions opts = {});

    int n_max() const { return n_max_; }
    bool fine_structure() const { return fine_structure_; }
    HalfInt spin() const { return spin_; }
    const SchemeOptions& options() const { return opts_; }

    const std::vector<State>& states() const { return states_; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<int>& shells() const { return shells_; }

    int shell_dim(int n) const;
    std::span<const State> shell_states(int n) const;
    // Index of a state within its shell block.
    int index_in_shell(const State& s) const;

    // Number of intra-shell dyads; this is the dimension of the statistical
    // equilibrium system.
    int dyad_dimension() const;

    bool has_term(Term t) const;
    int term_weight(Term t) const;  // number of magnetic sublevels

    // Fine-structure offset relative to the shell centroid, rad/s (includes
    // the optional 2S_1/2 shift).
    double energy_offset(const State& s) const;

    // Bohr shell energy, J.
    double shell_energy(int n) const;

private:
    int n_max_;
    bool fine_structure_;
    HalfInt spin_;
    SchemeOptions opts_;
    std::vector<State> states_;
    std::vector<Term> terms_;
    std::vector<int> shells_;
    std::map<int, std::pair<int, int>> shell_span_;  // n -> (offset, count)
    std::vector<double> offsets_;                    // aligned with states_
};

LevelScheme build_levels(int n_max, bool fine_structure, SchemeOptions opts = {});

// Hydrogenic radial integral <n L| r |n' L'> in units of a0, |L-L'| = 1, with
// the sign convention R_nl(0+) > 0. Same-n integrals feed Stark couplings,
// cross-n ones feed the Einstein rates.
double radial_dipole(int n, int L, int np, int Lp);

// Spontaneous term-to-term rate, s^-1. Requires n_upper > n_lower, |dL| = 1.
double einstein_A(Term upper, Term lower);

// Dirac fine-structure energy of (n, J) relative to the shell centroid, rad/s.
double fine_structure_offset(int n, HalfInt J);

// Bohr transition angular frequency between shells, rad/s (n_upper > n_lower).
double shell_omega(int n_upper, int n_lower);

// A spectral line in the flat-spectrum sense: one shell pair. All fine
// structure components of the line share one mean intensity.
struct LineId {
    int n_upper = 0;
    int n_lower = 0;
    friend constexpr auto operator<=>(const LineId&, const LineId&) = default;
    std::string label() const;  // e.g. "lyman-alpha"
};

std::optional<LineId> parse_line(const std::string& label);

struct RadiativePair {
    Term upper, lower;
    double radial = 0.0;      // a0 units
    double einstein_a = 0.0;  // s^-1
};

struct StarkPair {
    Term a, b;  // same shell, |La - Lb| = 1
    double radial = 0.0;
};

// Dipole data for a scheme: radiative term pairs grouped by line, and the
// intra-shell Stark couplings.
class TransitionTable {
public:
    explicit TransitionTable(const LevelScheme& scheme);

    const std::vector<RadiativePair>& radiative() const { return radiative_; }
    const std::vector<StarkPair>& stark() const { return stark_; }
    const std::vector<LineId>& lines() const { return lines_; }

    std::vector<RadiativePair> line_pairs(LineId line) const;
    double line_omega(LineId line) const;  // rad/s
    const RadiativePair* find(Term upper, Term lower) const;
    double stark_radial(Term a, Term b) const;  // 0 if not coupled

private:
    std::vector<RadiativePair> radiative_;
    std::vector<StarkPair> stark_;
    std::vector<LineId> lines_;
};

}  // namespace hydropol
