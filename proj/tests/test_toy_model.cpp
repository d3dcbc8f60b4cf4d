#include <cmath>
#include <random>

#include "doctest.h"
#include "hydropol/toy_model.hpp"

using namespace hydropol;

namespace {

ToyRates reference_rates() { return toy_rates_from(Illumination::diluted_planck(20000.0, 0.5)); }

double max_rate(const ToyRates& r) {
    return std::max({r.r12, r.r13, r.r21, r.r23, r.r31, r.r32});
}

}  // namespace

TEST_CASE("no electric mixing at omega_E = 0") {
    auto s = toy_solve(reference_rates(), 0.0);
    CHECK(s.c_2s2p == 0.0);
    CHECK(s.a_2p == 0.0);
    CHECK(s.n_1s + s.n_2s + s.n_2p + s.n_3p == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.n_1s > 0.99);  // almost everything in the ground state at w = 1/2
}

TEST_CASE("two-term model never aligns") {
    ToyRates r = reference_rates();
    r.r13 = r.r31 = r.r23 = r.r32 = 0.0;
    CHECK(two_term_factor(r) == 0.0);
    for (double w : {1e3, 1e6, 1e9, 1e12, 1e13}) {
        auto s = toy_solve(r, w);
        CHECK(std::abs(s.a_2p) < 1e-12);
        CHECK(std::abs(s.c_2s2p) < 1e-12);
        // and the populations sit at the TE-like ratio
        CHECK(s.n_2p == doctest::Approx(3.0 * s.n_2s).epsilon(1e-12));
    }
}

TEST_CASE("strong-field asymptote of the alignment") {
    ToyRates r = reference_rates();
    double w = 1e12;
    auto s = toy_solve(r, w);
    double asym = (s.n_2p - 3.0 * s.n_2s) / std::sqrt(6.0);
    CHECK(s.a_2p == doctest::Approx(asym).epsilon(1e-6));
    // coherence dies off
    auto s2 = toy_solve(r, 1e14);
    CHECK(std::abs(s2.c_2s2p) < std::abs(s.c_2s2p));
    CHECK(std::abs(toy_solve(r, 1e10).c_2s2p) > std::abs(s.c_2s2p));
}

TEST_CASE("closed form matches the linear solve for random rates") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> logr(4.0, 9.0), logw(3.0, 13.0);
    for (int it = 0; it < 1000; ++it) {
        ToyRates r{std::pow(10.0, logr(rng)), std::pow(10.0, logr(rng)),
                   std::pow(10.0, logr(rng)), std::pow(10.0, logr(rng)),
                   std::pow(10.0, logr(rng)), std::pow(10.0, logr(rng))};
        double w = std::pow(10.0, logw(rng));
        auto s = toy_solve(r, w);
        CHECK(s.residual <= 1e-12 * std::max(max_rate(r), 6.0 * w));
        auto [a, c] = toy_closed_form(r, s);
        CHECK(s.a_2p == doctest::Approx(a).epsilon(1e-12).scale(1e-300));
        CHECK(s.c_2s2p == doctest::Approx(c).epsilon(1e-12).scale(1e-300));
        // the population-argument route agrees up to its own cancellation floor
        auto [a2, c2] = toy_closed_form(r, s.n_2s, s.n_2p, w);
        double floor = 1e-15 * (s.n_2p + 3.0 * s.n_2s) / std::max(std::abs(s.imbalance), 1e-300);
        CHECK(s.a_2p == doctest::Approx(a2).epsilon(1e-12 + floor).scale(1e-300));
        // sign consistency: sign(a) = sign(c w) = sign(N2P - 3 N2S)
        double d = s.n_2p - 3.0 * s.n_2s;
        if (std::abs(d) > 1e-12) {
            CHECK(s.a_2p * d >= 0.0);
            CHECK(s.c_2s2p * w * d >= 0.0);
        }
    }
}

TEST_CASE("closed-form special cases") {
    ToyRates r = reference_rates();
    // N2P = 3 N2S gives no alignment (binary-exact inputs)
    auto [a0, c0] = toy_closed_form(r, 0.125, 0.375, 1e9);
    CHECK(a0 == 0.0);
    CHECK(c0 == 0.0);
    // omega_E = 0 gives no alignment
    auto [a1, c1] = toy_closed_form(r, 0.1, 0.5, 0.0);
    CHECK(a1 == 0.0);
    CHECK(c1 == 0.0);
    ToyRates bad = r;
    bad.r21 = 0.0;
    CHECK_THROWS(toy_closed_form(bad, 0.1, 0.5, 1e9));
    CHECK_THROWS(toy_solve(bad, 1e9));
    ToyRates dark{0, 0, 1e8, 0, 0, 0};
    CHECK_THROWS(toy_solve(dark, 1e9));
}

TEST_CASE("two-term factor values") {
    ToyRates r{1, 0, 1, 1, 1, 1};
    r.r13 = 1;  // all ones
    CHECK(two_term_factor(r) == doctest::Approx(-2.0));

    // detailed-balance rates give a vanishing factor
    ToyRates te = toy_rates_from(Illumination::planck_te(20000.0));
    CHECK(std::abs(two_term_factor(te)) <
          1e-10 * std::abs(3.0 * te.r13 * te.r32 * te.r21));

    // and the solution then shows no alignment at any field
    for (double w : {1e6, 1e9, 1e12}) {
        auto s = toy_solve(te, w);
        CHECK(std::abs(s.a_2p) < 1e-11);
        CHECK(s.n_2p == doctest::Approx(3.0 * s.n_2s).epsilon(1e-9));
    }
}

TEST_CASE("normalized alignment is monotone and bounded by 1/sqrt(6)") {
    ToyRates r = reference_rates();
    double prev = -1.0;
    for (double lw = 6.0; lw <= 14.0; lw += 0.25) {
        auto s = toy_solve(r, std::pow(10.0, lw));
        double norm = s.a_2p / (s.n_2p - 3.0 * s.n_2s);
        CHECK(norm >= prev);
        CHECK(norm <= 1.0 / std::sqrt(6.0) + 1e-12);
        prev = norm;
    }
}

TEST_CASE("reference rates are the minimal pumping set") {
    ToyRates r = reference_rates();
    CHECK(r.r21 == doctest::Approx(einstein_A({2, 1}, {1, 0}) * (1 + 1.34516016e-3)).epsilon(1e-8));
    CHECK(r.r12 == doctest::Approx(3.0 * einstein_A({2, 1}, {1, 0}) * 1.34516016e-3).epsilon(1e-8));
    CHECK(r.r31 == doctest::Approx(einstein_A({3, 1}, {1, 0}) * (1 + 4.48557695e-4)).epsilon(1e-8));
    CHECK(r.r32 == doctest::Approx(einstein_A({3, 1}, {2, 0}) * (1 + 2.50815982e-1)).epsilon(1e-8));
    CHECK(r.r23 == doctest::Approx(3.0 * einstein_A({3, 1}, {2, 0}) * 2.50815982e-1).epsilon(1e-8));
}
