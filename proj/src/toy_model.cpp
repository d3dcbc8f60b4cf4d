#include "hydropol/toy_model.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace hydropol {

ToySolution toy_solve(const ToyRates& r, double omega_e) {
    if (r.r21 <= 0.0) throw std::invalid_argument("toy_solve requires R21 > 0");
    if (r.r12 <= 0.0 && r.r13 <= 0.0 && r.r23 <= 0.0)
        throw std::invalid_argument("toy_solve requires at least one pumping rate");

    using Scalar = long double;
    const Scalar w = omega_e;
    const Scalar s6 = std::sqrt(6.0L);

    // A 3P term with no radiative links at all would be indeterminate; the
    // physical stationary state leaves it empty.
    const bool decoupled_3p =
        r.r13 == 0.0 && r.r31 == 0.0 && r.r23 == 0.0 && r.r32 == 0.0;

    // unknowns: N1S, N2S, N2P, N3P, c, a
    Eigen::Matrix<Scalar, 6, 6> m = Eigen::Matrix<Scalar, 6, 6>::Zero();
    Eigen::Matrix<Scalar, 6, 1> b = Eigen::Matrix<Scalar, 6, 1>::Zero();

    // 1S balance
    m(0, 0) = r.r12 + r.r13; m(0, 2) = -r.r21; m(0, 3) = -r.r31;
    // 2S balance (or pin the decoupled 3P population instead)
    if (decoupled_3p) {
        m(1, 3) = 1.0;
    } else {
        m(1, 1) = r.r23; m(1, 3) = -r.r32; m(1, 4) = -6.0 * w;
    }
    // 2P balance
    m(2, 0) = r.r12; m(2, 2) = -r.r21; m(2, 4) = -6.0 * w;
    // population conservation replaces the (linearly dependent) 3P balance
    m(3, 0) = m(3, 1) = m(3, 2) = m(3, 3) = 1.0;
    b(3) = 1.0;
    // 2P alignment
    m(4, 5) = r.r21; m(4, 4) = -2.0 * s6 * w;
    // 2S-2P coherence
    m(5, 1) = 3.0 * w; m(5, 2) = -w; m(5, 5) = s6 * w;
    m(5, 4) = 0.5 * (r.r23 + r.r21);

    Eigen::FullPivLU<Eigen::Matrix<Scalar, 6, 6>> lu(m);
    if (!lu.isInvertible()) throw std::runtime_error("toy system is singular");
    Eigen::Matrix<Scalar, 6, 1> x = lu.solve(b);
    // one refinement step keeps the mixed-magnitude components tight
    x += lu.solve((b - m * x).eval());

    ToySolution s;
    s.n_1s = static_cast<double>(x(0)); s.n_2s = static_cast<double>(x(1));
    s.n_2p = static_cast<double>(x(2)); s.n_3p = static_cast<double>(x(3));
    s.c_2s2p = static_cast<double>(x(4)); s.a_2p = static_cast<double>(x(5));
    s.imbalance = static_cast<double>(x(2) - 3.0L * x(1));
    s.omega_e = omega_e;

    // residuals of all six original balance equations, including the replaced one
    double res = 0.0;
    auto upd = [&](double v) { res = std::max(res, std::abs(v)); };
    upd((r.r12 + r.r13) * s.n_1s - r.r21 * s.n_2p - r.r31 * s.n_3p);
    upd(r.r23 * s.n_2s - r.r32 * s.n_3p - 6.0 * w * s.c_2s2p);
    upd(r.r12 * s.n_1s - r.r21 * s.n_2p - 6.0 * w * s.c_2s2p);
    upd(r.r13 * s.n_1s + r.r23 * s.n_2s - (r.r31 + r.r32) * s.n_3p);
    upd(r.r21 * s.a_2p - 2.0 * s6 * w * s.c_2s2p);
    upd(3.0 * w * s.n_2s - w * s.n_2p + s6 * w * s.a_2p +
        0.5 * (r.r23 + r.r21) * s.c_2s2p);
    s.residual = res;
    return s;
}

namespace {

std::pair<double, double> closed_form_impl(const ToyRates& r, long double imbalance,
                                           long double w) {
    if (r.r21 <= 0.0) throw std::invalid_argument("toy_closed_form requires R21 > 0");
    const long double r21 = r.r21, r23 = r.r23;
    const long double c = 2.0L * r21 * w * imbalance / (r21 * (r21 + r23) + 24.0L * w * w);
    const long double a = 2.0L * std::sqrt(6.0L) / r21 * c * w;
    return {static_cast<double>(a), static_cast<double>(c)};
}

}  // namespace

std::pair<double, double> toy_closed_form(const ToyRates& r, double n_2s, double n_2p,
                                          double omega_e) {
    return closed_form_impl(r, static_cast<long double>(n_2p) - 3.0L * n_2s, omega_e);
}

std::pair<double, double> toy_closed_form(const ToyRates& r, const ToySolution& s) {
    return closed_form_impl(r, s.imbalance, s.omega_e);
}

double two_term_factor(const ToyRates& r) {
    return r.r12 * r.r23 * r.r31 - 3.0 * r.r13 * r.r32 * r.r21;
}

ToyRates toy_rates_from(const Illumination& ill) {
    LevelScheme scheme(3, false,
                       {.term_filter = std::vector<Term>{{1, 0}, {2, 0}, {2, 1}, {3, 1}}});
    TransitionTable table(scheme);
    RateSet rs = rates(ill, table, scheme);
    ToyRates r;
    r.r21 = rs.downward({2, 1}, {1, 0});
    r.r12 = rs.upward({2, 1}, {1, 0});
    r.r31 = rs.downward({3, 1}, {1, 0});
    r.r13 = rs.upward({3, 1}, {1, 0});
    r.r32 = rs.downward({3, 1}, {2, 0});
    r.r23 = rs.upward({3, 1}, {2, 0});
    return r;
}

}  // namespace hydropol
