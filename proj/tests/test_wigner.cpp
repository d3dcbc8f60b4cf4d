#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hydropol/wigner.hpp"

using namespace hydropol;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

// distance in units of the last place of the larger magnitude
double ulps_apart(double a, double b) {
    if (a == b) return 0.0;
    double m = std::max(std::abs(a), std::abs(b));
    double ulp = std::nextafter(m, std::numeric_limits<double>::infinity()) - m;
    return std::abs(a - b) / ulp;
}

std::vector<HalfInt> range_j(int max_twice) {
    std::vector<HalfInt> out;
    for (int t = 0; t <= max_twice; ++t) out.push_back(h(t));
    return out;
}

std::vector<HalfInt> range_m(HalfInt j) {
    std::vector<HalfInt> out;
    for (int t = -j.twice(); t <= j.twice(); t += 2) out.push_back(h(t));
    return out;
}

}  // namespace

TEST_CASE("3j reference values") {
    CHECK(wigner3j(h(2), h(2), h(0), h(0), h(0), h(0)).value ==
          doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    // m1+m2+m3 != 0 is an exact zero
    auto z = wigner3j(h(2), h(2), h(2), h(2), h(2), h(0));
    CHECK(z.value == 0.0);
    REQUIRE(z.exact.has_value());
    CHECK(z.exact->sign == 0);
    // (j j 0; m -m 0) = (-1)^(j-m)/sqrt(2j+1) at j=3/2, m=1/2
    CHECK(wigner3j(h(3), h(3), h(0), h(1), h(-1), h(0)).value ==
          doctest::Approx(-0.5).epsilon(1e-14));
    // triangle violation
    CHECK(wigner3j(h(2), h(2), h(6), h(0), h(0), h(0)).value == 0.0);
    // |m| > j
    CHECK(wigner3j(h(2), h(2), h(2), h(4), h(-4), h(0)).value == 0.0);
}

TEST_CASE("6j reference values") {
    CHECK(wigner6j(h(4), h(2), h(2), h(0), h(2), h(2)).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    auto z = wigner6j(h(2), h(2), h(2), h(2), h(2), h(6));
    CHECK(z.value == 0.0);
    CHECK(z.exact->sign == 0);
    CHECK(wigner6j(h(1), h(1), h(2), h(1), h(1), h(2)).value ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("exact form is consistent with the float value") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(0, 12);  // up to j = 6
    for (int it = 0; it < 4000; ++it) {
        int t1 = d(rng), t2 = d(rng), t3 = d(rng);
        std::uniform_int_distribution<int> dm1(-t1, t1), dm2(-t2, t2);
        int tm1 = dm1(rng), tm2 = dm2(rng);
        if ((t1 + tm1) % 2 != 0) continue;
        if ((t2 + tm2) % 2 != 0) continue;
        auto v = wigner3j(h(t1), h(t2), h(t3), h(tm1), h(tm2), h(-tm1 - tm2));
        REQUIRE(v.exact.has_value());
        CHECK(ulps_apart(v.value, v.exact->to_double()) <= 1.0);
        double fp = wigner3j_fp(h(t1), h(t2), h(t3), h(tm1), h(tm2), h(-tm1 - tm2));
        if (v.value == 0.0)  // accidental zeros: float path cancels to round-off
            CHECK(std::abs(fp) < 1e-15);
        else
            CHECK(ulps_apart(v.value, fp) <= 4.0);
    }
    for (int it = 0; it < 4000; ++it) {
        int t[6] = {d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
        auto v = wigner6j(h(t[0]), h(t[1]), h(t[2]), h(t[3]), h(t[4]), h(t[5]));
        double fp = wigner6j_fp(h(t[0]), h(t[1]), h(t[2]), h(t[3]), h(t[4]), h(t[5]));
        if (v.value == 0.0)
            CHECK(std::abs(fp) < 1e-15);
        else
            CHECK(ulps_apart(v.value, fp) <= 4.0);
    }
}

TEST_CASE("3j orthogonality, exhaustive for j1,j2 <= 3") {
    for (HalfInt j1 : range_j(6)) {
        for (HalfInt j2 : range_j(6)) {
            if (!(j1 + j2).is_integer()) {
                // mixed integer/half-integer columns couple to half-integer j3
            }
            for (HalfInt j3 : range_j((j1 + j2).twice())) {
                if (!triangle_ok(j1, j2, j3)) continue;
                for (HalfInt j3p : range_j((j1 + j2).twice())) {
                    if (!triangle_ok(j1, j2, j3p)) continue;
                    for (HalfInt m3 : range_m(j3)) {
                        for (HalfInt m3p : range_m(j3p)) {
                            double sum = 0.0;
                            for (HalfInt m1 : range_m(j1)) {
                                HalfInt m2 = -m1 - m3;
                                if (!valid_projection(j2, m2)) continue;
                                sum += (j3.twice() + 1) *
                                       wigner3j(j1, j2, j3, m1, m2, m3).value *
                                       wigner3j(j1, j2, j3p, m1, m2, m3p).value;
                            }
                            double expect = (j3 == j3p && m3 == m3p) ? 1.0 : 0.0;
                            CHECK(sum == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("3j column permutation symmetry, exhaustive for j <= 2") {
    for (HalfInt j1 : range_j(4))
        for (HalfInt j2 : range_j(4))
            for (HalfInt j3 : range_j(4)) {
                if (!triangle_ok(j1, j2, j3)) continue;
                for (HalfInt m1 : range_m(j1))
                    for (HalfInt m2 : range_m(j2)) {
                        HalfInt m3 = -m1 - m2;
                        if (!valid_projection(j3, m3)) continue;
                        double base = wigner3j(j1, j2, j3, m1, m2, m3).value;
                        double even = wigner3j(j2, j3, j1, m2, m3, m1).value;
                        double odd = wigner3j(j2, j1, j3, m2, m1, m3).value;
                        double neg = wigner3j(j1, j2, j3, -m1, -m2, -m3).value;
                        int p = phase(j1 + j2 + j3);
                        CHECK(even == doctest::Approx(base).epsilon(1e-14).scale(1.0));
                        CHECK(odd == doctest::Approx(p * base).epsilon(1e-14).scale(1.0));
                        CHECK(neg == doctest::Approx(p * base).epsilon(1e-14).scale(1.0));
                    }
            }
}

TEST_CASE("6j tetrahedral symmetry, exhaustive for arguments <= 2") {
    for (int t1 = 0; t1 <= 4; ++t1)
        for (int t2 = 0; t2 <= 4; ++t2)
            for (int t3 = 0; t3 <= 4; ++t3)
                for (int t4 = 0; t4 <= 4; ++t4)
                    for (int t5 = 0; t5 <= 4; ++t5)
                        for (int t6 = 0; t6 <= 4; ++t6) {
                            double base =
                                wigner6j(h(t1), h(t2), h(t3), h(t4), h(t5), h(t6)).value;
                            // column permutation
                            double perm =
                                wigner6j(h(t2), h(t3), h(t1), h(t5), h(t6), h(t4)).value;
                            // swap upper/lower in first two columns
                            double swap =
                                wigner6j(h(t4), h(t5), h(t3), h(t1), h(t2), h(t6)).value;
                            CHECK(perm == doctest::Approx(base).epsilon(1e-14).scale(1.0));
                            CHECK(swap == doctest::Approx(base).epsilon(1e-14).scale(1.0));
                        }
}

TEST_CASE("Clebsch-Gordan phase convention anchors") {
    // 1 x 1/2 coupling table, Condon-Shortley phases
    CHECK(clebsch_gordan(h(2), h(0), h(1), h(1), h(3), h(1)) ==
          doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(clebsch_gordan(h(2), h(0), h(1), h(1), h(1), h(1)) ==
          doctest::Approx(-std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(clebsch_gordan(h(2), h(2), h(1), h(-1), h(1), h(1)) ==
          doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(clebsch_gordan(h(2), h(2), h(1), h(1), h(3), h(3)) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("reduced rotation matrices") {
    // identity at beta = 0
    for (int tm = -4; tm <= 4; tm += 2)
        for (int tmp = -4; tmp <= 4; tmp += 2) {
            double d = reduced_rotation(h(4), h(tm), h(tmp), 0.0);
            CHECK(d == doctest::Approx(tm == tmp ? 1.0 : 0.0).epsilon(1e-15).scale(1.0));
        }
    // d^1_{00}(beta) = cos(beta)
    CHECK(reduced_rotation(h(2), h(0), h(0), M_PI / 3.0) == doctest::Approx(0.5).epsilon(1e-14));
    // row orthonormality for j=2, beta=1.1
    for (int tm = -4; tm <= 4; tm += 2) {
        double sum = 0.0;
        for (int tmp = -4; tmp <= 4; tmp += 2) {
            double d = reduced_rotation(h(4), h(tm), h(tmp), 1.1);
            sum += d * d;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
    // known j=1 entry including sign: d^1_{1,0} = -sin(beta)/sqrt(2)
    CHECK(reduced_rotation(h(2), h(2), h(0), 0.7) ==
          doctest::Approx(-std::sin(0.7) / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("cache returns identical values across symmetry-related queries") {
    clear_wigner_cache();
    double a = wigner3j(h(3), h(2), h(1), h(1), h(0), h(-1)).value;
    double b = wigner3j(h(2), h(3), h(1), h(0), h(1), h(-1)).value;
    CHECK(b == doctest::Approx(phase(h(3) + h(2) + h(1)) * a).epsilon(1e-15).scale(1.0));
}
