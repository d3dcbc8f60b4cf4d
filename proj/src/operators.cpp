#include "hydropol/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "hydropol/constants.hpp"
#include "hydropol/wigner.hpp"

namespace hydropol {

namespace {

struct UncoupledState {
    int L;
    HalfInt mL;
    HalfInt mS;
};

// Product basis of a shell and the unitary mapping the coupled states onto it.
struct ShellBasis {
    std::vector<UncoupledState> product;
    Eigen::MatrixXd to_product;  // column j: coupled state j over the product basis
};

ShellBasis shell_basis(const LevelScheme& scheme, int shell) {
    ShellBasis out;
    auto states = scheme.shell_states(shell);
    const HalfInt S = scheme.spin();

    for (Term t : scheme.terms()) {
        if (t.n != shell) continue;
        for (int tmL = -2 * t.L; tmL <= 2 * t.L; tmL += 2)
            for (int tmS = -S.twice(); tmS <= S.twice(); tmS += 2)
                out.product.push_back({t.L, HalfInt::from_twice(tmL), HalfInt::from_twice(tmS)});
    }
    if (out.product.size() != states.size())
        throw std::logic_error("shell basis dimension mismatch");

    out.to_product = Eigen::MatrixXd::Zero(states.size(), states.size());
    for (size_t j = 0; j < states.size(); ++j) {
        const State& s = states[j];
        for (size_t i = 0; i < out.product.size(); ++i) {
            const UncoupledState& u = out.product[i];
            if (u.L != s.L) continue;
            out.to_product(i, j) =
                clebsch_gordan(HalfInt::whole(u.L), u.mL, S, u.mS, s.J, s.M);
        }
    }
    return out;
}

// <L mL| C^1_q |L' mL'>
double racah_c1(int L, HalfInt mL, int Lp, HalfInt mLp, int q) {
    double reduced = phase(HalfInt::whole(L)) *
                     std::sqrt((2.0 * L + 1.0) * (2.0 * Lp + 1.0)) *
                     wigner3j(HalfInt::whole(L), HalfInt::whole(1), HalfInt::whole(Lp),
                              HalfInt::whole(0), HalfInt::whole(0), HalfInt::whole(0))
                         .value;
    if (reduced == 0.0) return 0.0;
    return phase(HalfInt::whole(L) - mL) *
           wigner3j(HalfInt::whole(L), HalfInt::whole(1), HalfInt::whole(Lp), -mL,
                    HalfInt::whole(q), mLp)
               .value *
           reduced;
}

// <j m| J_q |j m'> for the spherical components of an angular momentum
double am_component(HalfInt j, HalfInt m, HalfInt mp, int q) {
    const double jj = j.value(), mm = mp.value();
    if (q == 0) return (m == mp) ? mm : 0.0;
    if (q == +1)
        return (m.twice() == mp.twice() + 2)
                   ? -std::sqrt(0.5 * (jj - mm) * (jj + mm + 1.0))
                   : 0.0;
    return (m.twice() == mp.twice() - 2) ? std::sqrt(0.5 * (jj + mm) * (jj - mm + 1.0))
                                         : 0.0;
}

}  // namespace

std::array<std::complex<double>, 3> spherical_components(const Eigen::Vector3d& v) {
    const double inv = 1.0 / std::sqrt(2.0);
    return {std::complex<double>(v.x() * inv, -v.y() * inv),  // q = -1
            std::complex<double>(v.z(), 0.0),                 // q = 0
            std::complex<double>(-v.x() * inv, -v.y() * inv)};  // q = +1
}

Eigen::MatrixXcd free_hamiltonian(const LevelScheme& scheme, int shell) {
    auto states = scheme.shell_states(shell);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(states.size(), states.size());
    for (size_t i = 0; i < states.size(); ++i) h(i, i) = scheme.energy_offset(states[i]);
    return h;
}

Eigen::MatrixXcd stark_hamiltonian(const LevelScheme& scheme, const TransitionTable& table,
                                   int shell, const Eigen::Vector3d& e_field_vm) {
    namespace k = constants;
    const ShellBasis basis = shell_basis(scheme, shell);
    const size_t d = basis.product.size();
    const auto eq = spherical_components(e_field_vm);

    // E . r = sum_q (-1)^q E_q r_{-q}; elements of r/a0 carry the same-shell
    // radial integrals.
    Eigen::MatrixXcd h_prod = Eigen::MatrixXcd::Zero(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            const UncoupledState &a = basis.product[i], &b = basis.product[j];
            if (a.mS != b.mS || std::abs(a.L - b.L) != 1) continue;
            double radial = table.stark_radial({shell, a.L}, {shell, b.L});
            if (radial == 0.0) continue;
            std::complex<double> sum = 0.0;
            for (int q = -1; q <= 1; ++q) {
                double ang = racah_c1(a.L, a.mL, b.L, b.mL, -q);
                if (ang == 0.0) continue;
                sum += (q % 2 == 0 ? 1.0 : -1.0) * eq[static_cast<size_t>(q + 1)] * ang;
            }
            h_prod(i, j) = -(k::e0 * k::a0 / k::hbar) * radial * sum;
        }
    return basis.to_product.transpose() * h_prod * basis.to_product;
}

Eigen::MatrixXcd zeeman_hamiltonian(const LevelScheme& scheme, int shell,
                                    const Eigen::Vector3d& b_field_tesla) {
    namespace k = constants;
    const ShellBasis basis = shell_basis(scheme, shell);
    const size_t d = basis.product.size();
    const auto bq = spherical_components(b_field_tesla);
    const HalfInt S = scheme.spin();

    // B . (J + S) with J + S = L + 2S
    Eigen::MatrixXcd h_prod = Eigen::MatrixXcd::Zero(d, d);
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) {
            const UncoupledState &a = basis.product[i], &b = basis.product[j];
            if (a.L != b.L) continue;
            std::complex<double> sum = 0.0;
            for (int q = -1; q <= 1; ++q) {
                double ang = 0.0;
                if (a.mS == b.mS)
                    ang += am_component(HalfInt::whole(a.L), a.mL, b.mL, -q);
                if (a.mL == b.mL) ang += 2.0 * am_component(S, a.mS, b.mS, -q);
                if (ang == 0.0) continue;
                sum += (q % 2 == 0 ? 1.0 : -1.0) * bq[static_cast<size_t>(q + 1)] * ang;
            }
            h_prod(i, j) = (k::mu_bohr / k::hbar) * sum;
        }
    return basis.to_product.transpose() * h_prod * basis.to_product;
}

std::array<Eigen::MatrixXcd, 3> dipole_blocks(const LevelScheme& scheme,
                                              const TransitionTable& table, LineId line) {
    const ShellBasis upper = shell_basis(scheme, line.n_upper);
    const ShellBasis lower = shell_basis(scheme, line.n_lower);

    std::array<Eigen::MatrixXcd, 3> out;
    for (int q = -1; q <= 1; ++q) {
        Eigen::MatrixXd t =
            Eigen::MatrixXd::Zero(lower.product.size(), upper.product.size());
        for (size_t i = 0; i < lower.product.size(); ++i)
            for (size_t j = 0; j < upper.product.size(); ++j) {
                const UncoupledState &f = lower.product[i], &u = upper.product[j];
                if (f.mS != u.mS || std::abs(f.L - u.L) != 1) continue;
                const RadiativePair* pair =
                    table.find({line.n_upper, u.L}, {line.n_lower, f.L});
                if (!pair) continue;
                double ang = racah_c1(f.L, f.mL, u.L, u.mL, q);
                if (ang == 0.0) continue;
                t(i, j) = pair->radial * ang;
            }
        out[static_cast<size_t>(q + 1)] =
            lower.to_product.transpose() * t * upper.to_product;
    }
    return out;
}

double line_rate_scale(double omega) {
    namespace k = constants;
    return omega * omega * omega * k::e0 * k::e0 * k::a0 * k::a0 /
           (3.0 * M_PI * k::eps0 * k::hbar * k::c_light * k::c_light * k::c_light);
}

}  // namespace hydropol
