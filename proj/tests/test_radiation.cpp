#include <cmath>

#include "doctest.h"
#include "hydropol/constants.hpp"
#include "hydropol/radiation.hpp"

using namespace hydropol;

TEST_CASE("planck function") {
    // frozen regression value at the Lyman-alpha frequency
    CHECK(planck(20000.0, 2.466e15) == doctest::Approx(5.9685852227e-07).epsilon(1e-9));

    // Rayleigh-Jeans limit: within 1% once h nu / k T <= 0.02, and the
    // deviation shrinks monotonically toward it
    namespace k = constants;
    double nu = 1e12;
    double rj_dev_prev = 1e9;
    for (double T : {1e3, 1e4, 1e5, 1e6}) {
        double rj = 2.0 * nu * nu * k::k_boltzmann * T / (k::c_light * k::c_light);
        double dev = std::abs(planck(T, nu) / rj - 1.0);
        CHECK(dev < rj_dev_prev);
        rj_dev_prev = dev;
        if (k::h_planck * nu / (k::k_boltzmann * T) <= 0.02) CHECK(dev < 0.01);
    }

    // monotonic in T at fixed nu
    double prev = 0.0;
    for (double T = 4000.0; T <= 64000.0; T *= 2.0) {
        double b = planck(T, 2.466e15);
        CHECK(b > prev);
        prev = b;
    }

    CHECK_THROWS(planck(-1.0, 1e15));
    CHECK_THROWS(planck(5000.0, 0.0));
}

TEST_CASE("photon occupation reference values") {
    auto scheme = build_levels(3, false);
    TransitionTable table(scheme);
    auto ill = Illumination::diluted_planck(20000.0, 0.5);
    CHECK(ill.photon_occupation({2, 1}, table.line_omega({2, 1})) ==
          doctest::Approx(1.34516016e-3).epsilon(1e-8));
    CHECK(ill.photon_occupation({3, 1}, table.line_omega({3, 1})) ==
          doctest::Approx(4.48557695e-4).epsilon(1e-8));
    CHECK(ill.photon_occupation({3, 2}, table.line_omega({3, 2})) ==
          doctest::Approx(2.50815982e-1).epsilon(1e-8));
}

TEST_CASE("dark limit: dilution zero leaves only spontaneous decay") {
    auto scheme = build_levels(3, false);
    TransitionTable table(scheme);
    auto rs = rates(Illumination::diluted_planck(20000.0, 0.0), table, scheme);
    for (const auto& e : rs.entries) {
        CHECK(e.r_abs == 0.0);
        CHECK(e.r_stim == 0.0);
        CHECK(e.r_spont > 0.0);
    }
}

TEST_CASE("detailed balance under planck_te for every pair of the n<=4 scheme") {
    auto scheme = build_levels(4, true);
    TransitionTable table(scheme);
    namespace k = constants;
    for (double T : {5000.0, 20000.0, 50000.0}) {
        auto rs = rates(Illumination::planck_te(T), table, scheme);
        for (const auto& e : rs.entries) {
            double omega = shell_omega(e.upper.n, e.lower.n);
            double boltz = std::exp(-k::hbar * omega / (k::k_boltzmann * T));
            double gu = scheme.term_weight(e.upper);
            double gl = scheme.term_weight(e.lower);
            // stationary two-level balance: N_u/N_l = r_abs/r_down = (g_u/g_l) e^(-h nu/kT)
            double ratio = e.r_abs / (e.r_spont + e.r_stim);
            CHECK(ratio == doctest::Approx((gu / gl) * boltz).epsilon(1e-10));
        }
    }
}

TEST_CASE("per-line mode") {
    auto scheme = build_levels(3, false,
                               {.term_filter = std::vector<Term>{{1, 0}, {2, 0}, {2, 1}, {3, 1}}});
    TransitionTable table(scheme);
    // pump only lyman-beta at its TE intensity
    double jbar = planck(20000.0, table.line_omega({3, 1}) / (2 * M_PI));
    auto ill = Illumination::per_line({{LineId{3, 1}, jbar}});
    CHECK(ill.mean_intensity({3, 1}, table.line_omega({3, 1})) == jbar);
    CHECK_THROWS(ill.mean_intensity({2, 1}, table.line_omega({2, 1})));
    CHECK_THROWS(rates(ill, table, scheme));  // Ly-alpha pair present but unconfigured

    auto full = Illumination::per_line(
        {{LineId{3, 1}, jbar}, {LineId{2, 1}, 0.0}, {LineId{3, 2}, 0.0}});
    auto rs = rates(full, table, scheme);
    CHECK(rs.upward({2, 1}, {1, 0}) == 0.0);
    CHECK(rs.upward({3, 1}, {1, 0}) > 0.0);
    CHECK(rs.downward({2, 1}, {1, 0}) == doctest::Approx(einstein_A({2, 1}, {1, 0})));
}

TEST_CASE("g-factor ratio in absorption rates") {
    auto scheme = build_levels(2, false);
    TransitionTable table(scheme);
    auto rs = rates(Illumination::diluted_planck(20000.0, 0.5), table, scheme);
    const TermRates* e = rs.find({2, 1}, {1, 0});
    REQUIRE(e != nullptr);
    CHECK(e->r_abs == doctest::Approx(3.0 * e->r_stim).epsilon(1e-14));
}
