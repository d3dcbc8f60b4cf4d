#include <cmath>

#include "doctest.h"
#include "hydropol/emission.hpp"
#include "hydropol/se_solver.hpp"

using namespace hydropol;

namespace {

namespace k = constants;

std::shared_ptr<const LevelScheme> make(int n_max, bool fs, SchemeOptions opts = {}) {
    return std::make_shared<LevelScheme>(n_max, fs, std::move(opts));
}

Illumination lyman_beta_only(double T = 20000.0, double w = 0.5) {
    auto scheme = build_levels(3, false);
    TransitionTable table(scheme);
    double jbar = w * planck(T, table.line_omega({3, 1}) / (2 * M_PI));
    std::map<LineId, double> m;
    for (int nl = 1; nl <= 3; ++nl)
        for (int nu = nl + 1; nu <= 4; ++nu) m[{nu, nl}] = 0.0;
    m[{3, 1}] = jbar;
    return Illumination::per_line(m);
}

FieldConfig e_field_z(double omega_e) {
    FieldConfig f;
    f.e_field_vm = Eigen::Vector3d(0, 0, omega_e / k::omega_e_per_vm);
    return f;
}

}  // namespace

TEST_CASE("isotropic upper level: unpolarized, total photon rate = A N_u") {
    auto scheme = make(2, false);
    DensityMatrix rho(scheme);
    rho.block(1)(0, 0) = 0.7;
    rho.block(2) = 0.075 * Eigen::MatrixXcd::Identity(4, 4);

    auto g = ViewingGeometry::from_angles(1.1, 0.4);
    StokesResult s = stokes_emissivity(rho, {2, 1}, {1, 0}, g);
    CHECK(s.i > 0.0);
    CHECK(std::abs(s.q) < 1e-14 * s.i);
    CHECK(std::abs(s.u) < 1e-14 * s.i);
    CHECK(std::abs(s.v) < 1e-14 * s.i);

    // integrate I over the sphere: 16-point Gauss-Legendre in cos(theta) is
    // exact for the dipole pattern
    double total = 0.0;
    const int np = 16, na = 8;
    for (int ip = 0; ip < np; ++ip) {
        // Chebyshev-free simple GL nodes via Eigen eigenvalues would be
        // overkill; the integrand is degree <= 2 in cos(theta), Simpson is fine
        double c = -1.0 + (ip + 0.5) * 2.0 / np;
        double theta = std::acos(c);
        for (int ia = 0; ia < na; ++ia) {
            double phi = 2.0 * M_PI * ia / na;
            StokesResult sp = stokes_emissivity(rho, {2, 1}, {1, 0},
                                                ViewingGeometry::from_angles(theta, phi));
            total += sp.i * (2.0 / np) * (2.0 * M_PI / na);
        }
    }
    double expected = einstein_A({2, 1}, {1, 0}) * 3.0 * 0.075;
    CHECK(total == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("pi emitter viewed at 90 degrees is fully polarized along the field") {
    auto scheme = make(2, false);
    DensityMatrix rho(scheme);
    State p0{2, 1, HalfInt::whole(1), HalfInt::whole(0)};
    rho.set(p0, p0, 1.0);

    auto g = ViewingGeometry::from_angles(M_PI / 2.0, 0.0);  // view x, reference y
    StokesResult s = stokes_emissivity(rho, {2, 1}, {1, 0}, g);
    CHECK(blp(s) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(s.u) < 1e-14 * s.i);
    CHECK(std::abs(s.v) < 1e-14 * s.i);
    // no emission along the quantization axis from a pi transition
    StokesResult sz = stokes_emissivity(rho, {2, 1}, {1, 0},
                                        ViewingGeometry::from_angles(0.0, 0.0));
    CHECK(sz.i < 1e-14 * s.i);
}

TEST_CASE("sigma+ emitter viewed along +z is fully circular") {
    auto scheme = make(2, false);
    DensityMatrix rho(scheme);
    State p1{2, 1, HalfInt::whole(1), HalfInt::whole(1)};
    rho.set(p1, p1, 1.0);
    StokesResult s = stokes_emissivity(rho, {2, 1}, {1, 0},
                                       ViewingGeometry::from_angles(0.0, 0.0));
    CHECK(std::abs(s.v) == doctest::Approx(s.i).epsilon(1e-14));
    CHECK(std::abs(s.q) < 1e-14 * s.i);
    // convention anchor: a photon carrying +1 unit of z angular momentum
    // (M_u = +1 -> M_l = 0) viewed along +z has V > 0
    CHECK(s.v > 0.0);
}

TEST_CASE("linearity in rho") {
    auto scheme = make(2, false);
    DensityMatrix r1(scheme), r2(scheme);
    Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Random(4, 4), m2 = Eigen::MatrixXcd::Random(4, 4);
    r1.block(2) = 0.5 * (m1 + m1.adjoint());
    r2.block(2) = 0.5 * (m2 + m2.adjoint());
    DensityMatrix sum(scheme);
    sum.block(2) = 0.3 * r1.block(2) + 1.7 * r2.block(2);

    auto g = ViewingGeometry::from_angles(0.9, 2.2);
    StokesResult s1 = stokes_emissivity(r1, {2, 1}, {1, 0}, g);
    StokesResult s2 = stokes_emissivity(r2, {2, 1}, {1, 0}, g);
    StokesResult ss = stokes_emissivity(sum, {2, 1}, {1, 0}, g);
    CHECK(ss.i == doctest::Approx(0.3 * s1.i + 1.7 * s2.i).epsilon(1e-12));
    CHECK(ss.q == doctest::Approx(0.3 * s1.q + 1.7 * s2.q).epsilon(1e-12));
    CHECK(ss.u == doctest::Approx(0.3 * s1.u + 1.7 * s2.u).epsilon(1e-12));
    CHECK(ss.v == doctest::Approx(0.3 * s1.v + 1.7 * s2.v).epsilon(1e-12));
}

TEST_CASE("front-back symmetry of the linear polarization") {
    auto toy = restrict_to_toy(*make(3, false));
    auto ill = Illumination::diluted_planck(20000.0, 0.5);
    DensityMatrix rho = stationary_solve(assemble(toy, ill, e_field_z(2e9)));
    for (double theta : {0.3, 0.9, 1.4}) {
        StokesResult a = stokes_emissivity(rho, {2, 1}, {1, 0},
                                           ViewingGeometry::from_angles(theta, 0.7));
        StokesResult b = stokes_emissivity(rho, {2, 1}, {1, 0},
                                           ViewingGeometry::from_angles(M_PI - theta, 0.7));
        CHECK(blp(a) == doctest::Approx(blp(b)).epsilon(1e-9));
    }
}

TEST_CASE("zero fields and zero anisotropy give unpolarized lines") {
    auto scheme = make(3, true);
    auto ill = Illumination::diluted_planck(20000.0, 0.5);
    DensityMatrix rho = stationary_solve(assemble(scheme, ill, FieldConfig{}));
    for (LineId line : {LineId{2, 1}, LineId{3, 1}, LineId{3, 2}}) {
        StokesResult s = stokes_line(rho, line, ViewingGeometry::from_angles(M_PI / 2, 0.0));
        CHECK(std::abs(blp(s)) < 1e-10);
        CHECK(std::abs(bcp(s)) < 1e-10);
    }
}

TEST_CASE("electric fields alone never produce circular polarization") {
    auto scheme = make(3, true);
    auto ill = Illumination::diluted_planck(20000.0, 0.5);
    FieldConfig f;
    f.e_field_vm = Eigen::Vector3d(3e4, 1e4, 2e4);  // generic direction
    DensityMatrix rho = stationary_solve(assemble(scheme, ill, f));
    for (double theta : {0.0, 0.7, M_PI / 2}) {
        for (LineId line : {LineId{2, 1}, LineId{3, 2}}) {
            StokesResult s = stokes_line(rho, line, ViewingGeometry::from_angles(theta, 0.3));
            CHECK(std::abs(bcp(s)) < 1e-10);
        }
    }
}

TEST_CASE("lyman-beta pumping: strong-field Ly-alpha is fully polarized along E") {
    auto toy = restrict_to_toy(*make(3, false));
    DensityMatrix rho = stationary_solve(assemble(toy, lyman_beta_only(), e_field_z(1e10)));
    StokesResult s = stokes_emissivity(rho, {2, 1}, {1, 0},
                                       ViewingGeometry::from_angles(M_PI / 2, 0.0));
    CHECK(blp(s) == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("lyman-beta pumping: weak-field limit with fine structure") {
    // With the physical 2S_1/2 - 2P_1/2 interval enabled, the vanishing-field
    // polarization tends to the diabatic quenching value +32.88%.
    auto scheme = make(3, true, {.lamb_shift_2s = 2.0 * M_PI * 1057.845e6});
    auto view = ViewingGeometry::from_angles(M_PI / 2, 0.0);
    double prev = 0.0;
    for (double we : {1e4, 1e3}) {
        DensityMatrix rho = stationary_solve(assemble(scheme, lyman_beta_only(), e_field_z(we)));
        StokesResult s = stokes_emissivity(rho, {2, 1}, {1, 0}, view);
        double p = blp(s);
        CHECK(std::abs(p - 0.3288) < 0.003);
        if (prev != 0.0) CHECK(p == doctest::Approx(prev).epsilon(1e-4));
        prev = p;
    }
    // without the 2S shift the degenerate channel drains the metastable
    // population isotropically and the polarization collapses
    auto degenerate = make(3, true);
    DensityMatrix rho0 = stationary_solve(assemble(degenerate, lyman_beta_only(), e_field_z(1e5)));
    CHECK(std::abs(blp(stokes_emissivity(rho0, {2, 1}, {1, 0}, view))) < 0.02);
}

TEST_CASE("errors") {
    auto scheme = make(2, false);
    DensityMatrix rho(scheme);
    auto g = ViewingGeometry::from_angles(1.0, 0.0);
    CHECK_THROWS(stokes_emissivity(rho, {2, 0}, {1, 0}, g));  // dL = 0
    CHECK_THROWS(stokes_emissivity(rho, {1, 0}, {2, 1}, g));  // not downward
    CHECK_THROWS(stokes_emissivity(rho, {3, 1}, {1, 0}, g));  // outside scheme
    CHECK_THROWS(blp(StokesResult{}));                        // I = 0
    ViewingGeometry bad;
    bad.reference = Eigen::Vector3d(1, 0, 0);
    bad.direction = Eigen::Vector3d(1, 0, 0);
    CHECK_THROWS(stokes_emissivity(rho, {2, 1}, {1, 0}, bad));
}
