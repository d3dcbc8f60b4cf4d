#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <map>
#include <memory>
#include <tuple>

#include "hydropol/hydrogen.hpp"

namespace hydropol {

using Complex = std::complex<double>;

// Atomic density matrix over intra-shell |nLJM><nL'J'M'| dyads: one complex
// block per Bohr shell. Coherences between different shells are excluded
// (flat-spectrum approximation), which fixes the dyad count.
class DensityMatrix {
public:
    explicit DensityMatrix(std::shared_ptr<const LevelScheme> scheme);

    const LevelScheme& scheme() const { return *scheme_; }
    std::shared_ptr<const LevelScheme> scheme_ptr() const { return scheme_; }

    Eigen::MatrixXcd& block(int n);
    const Eigen::MatrixXcd& block(int n) const;

    Complex get(const State& a, const State& b) const;
    void set(const State& a, const State& b, Complex v);

    double trace() const;
    void scale(double f);

    // Largest |rho - rho^dagger| element.
    double hermiticity_error() const;
    void hermitize();
    double min_population() const;

    // Vectorization used by the SE solver: shells in order, row-major blocks.
    Eigen::VectorXcd to_vector() const;
    static DensityMatrix from_vector(std::shared_ptr<const LevelScheme> scheme,
                                     const Eigen::VectorXcd& v);

    // Plain-text dump: header line, then per shell "shell <n> dim <d>" and d
    // rows of d "re im" pairs.
    void write_text(std::ostream& os) const;

private:
    std::shared_ptr<const LevelScheme> scheme_;
    std::map<int, Eigen::MatrixXcd> blocks_;
};

// Irreducible components rho^K_Q(LJ, L'J') per shell. K and Q are integers
// for every basis this code uses.
class StatisticalTensors {
public:
    struct Key {
        int n, L, twoJ, Lp, twoJp, K, Q;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    explicit StatisticalTensors(std::shared_ptr<const LevelScheme> scheme)
        : scheme_(std::move(scheme)) {}

    const LevelScheme& scheme() const { return *scheme_; }
    std::shared_ptr<const LevelScheme> scheme_ptr() const { return scheme_; }

    Complex get(const Key& k) const;
    void set(const Key& k, Complex v);
    const std::map<Key, Complex>& components() const { return components_; }

    void write_text(std::ostream& os) const;

private:
    std::shared_ptr<const LevelScheme> scheme_;
    std::map<Key, Complex> components_;
};

StatisticalTensors to_tensors(const DensityMatrix& rho);
DensityMatrix from_tensors(const StatisticalTensors& t);

// Term-level multipole rho^K_Q(L, L') within shell n. With fine structure this
// is the 6j-weighted recoupling over (J, J'); in the spinless basis it is the
// tensor itself.
Complex term_tensor(const StatisticalTensors& t, int n, int L, int Lp, int K, int Q);

struct Observables {
    // N_{nL}(J) keyed by (n, L, 2J)
    std::map<std::tuple<int, int, int>, double> level_populations;
    std::map<Term, double> term_populations;
    double a_2p = 0.0;       // rho^2_0 of the 2P term
    Complex c_2s2p = 0.0;    // rho^1_0 between the 2S and 2P terms
    double max_rel_multipole = 0.0;  // largest K>0 term multipole / K=0 scale
};

Observables observables(const DensityMatrix& rho);

// Largest |rho^K_Q(L,L')| with K >= k_min across all shells, relative to the
// geometric mean of the corresponding K=0 term tensors.
double max_relative_term_multipole(const DensityMatrix& rho, int k_min = 1);

}  // namespace hydropol
