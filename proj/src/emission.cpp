#include "hydropol/emission.hpp"

#include <cmath>
#include <stdexcept>

#include "hydropol/operators.hpp"

namespace hydropol {

ViewingGeometry ViewingGeometry::from_angles(double theta, double phi) {
    ViewingGeometry g;
    g.direction = Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                  std::sin(theta) * std::sin(phi), std::cos(theta));
    Eigen::Vector3d ref = Eigen::Vector3d::UnitZ().cross(g.direction);
    if (ref.norm() < 1e-12) ref = Eigen::Vector3d::UnitX();
    g.reference = ref.normalized();
    return g;
}

void ViewingGeometry::validate() const {
    if (std::abs(direction.norm() - 1.0) > 1e-12 || std::abs(reference.norm() - 1.0) > 1e-12 ||
        std::abs(direction.dot(reference)) > 1e-12)
        throw std::invalid_argument("viewing geometry is not an orthonormal pair");
}

double blp(const StokesResult& s) {
    if (s.i <= 0.0) throw std::invalid_argument("blp undefined for I <= 0");
    return s.q / s.i;
}

double bcp(const StokesResult& s) {
    if (s.i <= 0.0) throw std::invalid_argument("bcp undefined for I <= 0");
    return s.v / s.i;
}

namespace {

// emissivity from the selected (lower term set, upper term set) of a line
StokesResult stokes_impl(const DensityMatrix& rho, LineId line,
                         const std::vector<int>& lower_ls, const std::vector<int>& upper_ls,
                         const ViewingGeometry& geom) {
    geom.validate();
    const LevelScheme& scheme = rho.scheme();
    TransitionTable table(scheme);

    auto tq = dipole_blocks(scheme, table, line);
    const auto lower_states = scheme.shell_states(line.n_lower);
    const auto upper_states = scheme.shell_states(line.n_upper);

    // mask amplitudes outside the requested term sets
    auto keep = [](const std::vector<int>& ls, int l) {
        return std::find(ls.begin(), ls.end(), l) != ls.end();
    };
    for (auto& t : tq) {
        for (size_t f = 0; f < lower_states.size(); ++f)
            if (!keep(lower_ls, lower_states[f].L)) t.row(f).setZero();
        for (size_t u = 0; u < upper_states.size(); ++u)
            if (!keep(upper_ls, upper_states[u].L)) t.col(u).setZero();
    }

    // cartesian amplitude components from the spherical ones
    const Complex inv_sqrt2(1.0 / std::sqrt(2.0), 0.0);
    const Complex i_unit(0.0, 1.0);
    Eigen::MatrixXcd ax = (tq[0] - tq[2]) * inv_sqrt2;
    Eigen::MatrixXcd ay = (tq[0] + tq[2]) * (i_unit * inv_sqrt2.real());
    const Eigen::MatrixXcd& az = tq[1];

    // polarization basis spanning the transverse plane
    const Eigen::Vector3d ea = geom.reference;
    const Eigen::Vector3d eb = geom.direction.cross(geom.reference).normalized();
    Eigen::MatrixXcd amp_a = ea.x() * ax + ea.y() * ay + ea.z() * az;
    Eigen::MatrixXcd amp_b = eb.x() * ax + eb.y() * ay + eb.z() * az;

    const Eigen::MatrixXcd& upper_rho = rho.block(line.n_upper);
    const double c0 = 3.0 / (8.0 * M_PI) * line_rate_scale(table.line_omega(line));
    const Complex jaa = c0 * (amp_a * upper_rho * amp_a.adjoint()).trace();
    const Complex jbb = c0 * (amp_b * upper_rho * amp_b.adjoint()).trace();
    const Complex jab = c0 * (amp_a * upper_rho * amp_b.adjoint()).trace();

    StokesResult s;
    s.i = jaa.real() + jbb.real();
    s.q = jaa.real() - jbb.real();
    s.u = 2.0 * jab.real();
    // V > 0: field rotating from the reference toward direction x reference
    s.v = -2.0 * jab.imag();
    return s;
}

}  // namespace

StokesResult stokes_emissivity(const DensityMatrix& rho, Term upper, Term lower,
                               const ViewingGeometry& geom) {
    const LevelScheme& scheme = rho.scheme();
    if (!scheme.has_term(upper) || !scheme.has_term(lower))
        throw std::invalid_argument("term outside the scheme");
    if (upper.n <= lower.n || std::abs(upper.L - lower.L) != 1)
        throw std::invalid_argument("forbidden line " + upper.label() + " -> " +
                                    lower.label());
    return stokes_impl(rho, {upper.n, lower.n}, {lower.L}, {upper.L}, geom);
}

StokesResult stokes_line(const DensityMatrix& rho, LineId line,
                         const ViewingGeometry& geom) {
    const LevelScheme& scheme = rho.scheme();
    std::vector<int> lower_ls, upper_ls;
    for (Term t : scheme.terms()) {
        if (t.n == line.n_lower) lower_ls.push_back(t.L);
        if (t.n == line.n_upper) upper_ls.push_back(t.L);
    }
    if (lower_ls.empty() || upper_ls.empty())
        throw std::invalid_argument("line " + line.label() + " outside the scheme");
    return stokes_impl(rho, line, lower_ls, upper_ls, geom);
}

}  // namespace hydropol
