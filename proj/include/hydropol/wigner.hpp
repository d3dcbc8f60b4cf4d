#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>

#include "hydropol/half_integer.hpp"

namespace hydropol {

using BigRat = boost::multiprecision::cpp_rational;

// Exact representation of a coupling coefficient: value = sign * sqrt(radicand),
// with radicand a non-negative rational.
struct ExactSqrt {
    int sign = 0;
    BigRat radicand = 0;
    double to_double() const;
};

struct WignerValue {
    double value = 0.0;
    std::optional<ExactSqrt> exact;
};

// Wigner 3j symbol. Couplings violating the selection rules (triangle rule,
// m1+m2+m3 != 0, |m| > j, parity mismatch) give an exact zero, not an error.
WignerValue wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                     HalfInt m1, HalfInt m2, HalfInt m3);

// Wigner 6j symbol; exact zero whenever one of the four triads fails the
// triangle rule.
WignerValue wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                     HalfInt l1, HalfInt l2, HalfInt l3);

// Plain double-precision Racah sums. Independent of the exact path; used to
// cross-check it.
double wigner3j_fp(HalfInt j1, HalfInt j2, HalfInt j3,
                   HalfInt m1, HalfInt m2, HalfInt m3);
double wigner6j_fp(HalfInt j1, HalfInt j2, HalfInt j3,
                   HalfInt l1, HalfInt l2, HalfInt l3);

// <j1 m1 j2 m2 | j3 m3> from the 3j symbol.
double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt j3, HalfInt m3);

// Wigner small-d matrix element d^j_{m,mp}(beta) = <j m|exp(-i beta Jy)|j mp>.
double reduced_rotation(HalfInt j, HalfInt m, HalfInt mp, double beta);

// Drops all memoized symbols (test hook).
void clear_wigner_cache();

}  // namespace hydropol
