#include "hydropol/wigner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace hydropol {

using BigInt = boost::multiprecision::cpp_int;

double ExactSqrt::to_double() const {
    if (sign == 0) return 0.0;
    return sign * std::sqrt(radicand.convert_to<double>());
}

namespace {

// ---------------------------------------------------------------------------
// Exact factorial arithmetic.
//
// Products and ratios of factorials are tracked as prime-exponent vectors
// (Legendre's formula), so the radicand under the square root stays a fully
// reduced rational. The alternating Racah sums are accumulated in exact
// big-rational arithmetic.
// ---------------------------------------------------------------------------

const std::vector<int>& primes_upto(int n) {
    static std::vector<int> primes;
    static int limit = 1;
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    if (n > limit) {
        limit = std::max(n, 2 * limit);
        primes.clear();
        std::vector<bool> comp(limit + 1, false);
        for (int p = 2; p <= limit; ++p) {
            if (comp[p]) continue;
            primes.push_back(p);
            for (long q = static_cast<long>(p) * p; q <= limit; q += p) comp[q] = true;
        }
    }
    return primes;
}

// exponent of prime p in n!
int legendre_exponent(int n, int p) {
    int e = 0;
    while (n > 0) {
        n /= p;
        e += n;
    }
    return e;
}

class FactorialProduct {
public:
    explicit FactorialProduct(int max_n) : max_n_(std::max(max_n, 2)) {}

    void mul_factorial(int n, int mult) {
        terms_.push_back({n, mult});
    }

    BigRat to_rational() const {
        const auto& primes = primes_upto(max_n_);
        BigInt num = 1, den = 1;
        for (int p : primes) {
            if (p > max_n_) break;
            long e = 0;
            for (auto [n, mult] : terms_) e += static_cast<long>(mult) * legendre_exponent(n, p);
            if (e > 0)
                num *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e));
            else if (e < 0)
                den *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(-e));
        }
        return BigRat(num, den);
    }

private:
    int max_n_;
    std::vector<std::pair<int, int>> terms_;
};

BigInt big_factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long double dbl_factorial(int n) {
    static const std::vector<long double> table = [] {
        std::vector<long double> t(171);
        t[0] = 1.0L;
        for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table[static_cast<size_t>(n)];
}

// (a + b - c) as an exact integer; callers have checked parity.
int tri_int(HalfInt a, HalfInt b, HalfInt c) { return (a + b - c).as_int(); }

// ---------------------------------------------------------------------------
// Racah single-sum formulas.
// ---------------------------------------------------------------------------

bool selection_3j(HalfInt j1, HalfInt j2, HalfInt j3,
                  HalfInt m1, HalfInt m2, HalfInt m3) {
    if ((m1 + m2 + m3).twice() != 0) return false;
    if (!valid_projection(j1, m1) || !valid_projection(j2, m2) || !valid_projection(j3, m3))
        return false;
    return triangle_ok(j1, j2, j3);
}

ExactSqrt exact_3j(HalfInt j1, HalfInt j2, HalfInt j3,
                   HalfInt m1, HalfInt m2, HalfInt m3) {
    if (!selection_3j(j1, j2, j3, m1, m2, m3)) return {};

    const int a1 = tri_int(j1, j2, j3);   // j1+j2-j3
    const int a2 = tri_int(j1, j3, j2);   // j1-j2+j3
    const int a3 = tri_int(j2, j3, j1);   // -j1+j2+j3
    const int per = (j1 + j2 + j3).as_int();

    const int j1pm1 = (j1 + m1).as_int(), j1mm1 = (j1 - m1).as_int();
    const int j2pm2 = (j2 + m2).as_int(), j2mm2 = (j2 - m2).as_int();
    const int j3pm3 = (j3 + m3).as_int(), j3mm3 = (j3 - m3).as_int();

    const int b1 = (j3 - j2 + m1).as_int();  // can be negative
    const int b2 = (j3 - j1 - m2).as_int();

    const int kmin = std::max({0, -b1, -b2});
    const int kmax = std::min({a1, j1mm1, j2pm2});

    BigRat sum = 0;
    for (int k = kmin; k <= kmax; ++k) {
        BigInt den = big_factorial(k) * big_factorial(a1 - k) * big_factorial(j1mm1 - k) *
                     big_factorial(j2pm2 - k) * big_factorial(b1 + k) * big_factorial(b2 + k);
        BigRat term(1, den);
        if (k % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return {};

    FactorialProduct fp(per + 1);
    fp.mul_factorial(a1, 1);
    fp.mul_factorial(a2, 1);
    fp.mul_factorial(a3, 1);
    fp.mul_factorial(per + 1, -1);
    fp.mul_factorial(j1pm1, 1);
    fp.mul_factorial(j1mm1, 1);
    fp.mul_factorial(j2pm2, 1);
    fp.mul_factorial(j2mm2, 1);
    fp.mul_factorial(j3pm3, 1);
    fp.mul_factorial(j3mm3, 1);

    ExactSqrt out;
    out.radicand = fp.to_rational() * sum * sum;
    int sgn = sum > 0 ? 1 : -1;
    sgn *= phase(j1 - j2 - m3);
    out.sign = sgn;
    return out;
}

bool selection_6j(HalfInt j1, HalfInt j2, HalfInt j3,
                  HalfInt l1, HalfInt l2, HalfInt l3) {
    return triangle_ok(j1, j2, j3) && triangle_ok(j1, l2, l3) &&
           triangle_ok(l1, j2, l3) && triangle_ok(l1, l2, j3);
}

ExactSqrt exact_6j(HalfInt j1, HalfInt j2, HalfInt j3,
                   HalfInt l1, HalfInt l2, HalfInt l3) {
    if (!selection_6j(j1, j2, j3, l1, l2, l3)) return {};

    const int s1 = (j1 + j2 + j3).as_int();
    const int s2 = (j1 + l2 + l3).as_int();
    const int s3 = (l1 + j2 + l3).as_int();
    const int s4 = (l1 + l2 + j3).as_int();
    const int p1 = (j1 + j2 + l1 + l2).as_int();
    const int p2 = (j2 + j3 + l2 + l3).as_int();
    const int p3 = (j3 + j1 + l3 + l1).as_int();

    const int kmin = std::max({s1, s2, s3, s4});
    const int kmax = std::min({p1, p2, p3});

    BigRat sum = 0;
    for (int k = kmin; k <= kmax; ++k) {
        BigInt den = big_factorial(k - s1) * big_factorial(k - s2) * big_factorial(k - s3) *
                     big_factorial(k - s4) * big_factorial(p1 - k) * big_factorial(p2 - k) *
                     big_factorial(p3 - k);
        BigRat term(big_factorial(k + 1), den);
        if (k % 2 != 0) term = -term;
        sum += term;
    }
    if (sum == 0) return {};

    FactorialProduct fp(std::max({s1, s2, s3, s4}) + 1);
    auto add_delta = [&](HalfInt a, HalfInt b, HalfInt c) {
        fp.mul_factorial(tri_int(a, b, c), 1);
        fp.mul_factorial(tri_int(a, c, b), 1);
        fp.mul_factorial(tri_int(b, c, a), 1);
        fp.mul_factorial((a + b + c).as_int() + 1, -1);
    };
    add_delta(j1, j2, j3);
    add_delta(j1, l2, l3);
    add_delta(l1, j2, l3);
    add_delta(l1, l2, j3);

    ExactSqrt out;
    out.radicand = fp.to_rational() * sum * sum;
    out.sign = sum > 0 ? 1 : -1;
    return out;
}

// ---------------------------------------------------------------------------
// Memoization on symmetry-canonical keys.
//
// 3j: column permutations and simultaneous m-negation (12 variants); odd
// operations carry the phase (-1)^(j1+j2+j3). 6j: column permutations and
// upper/lower swaps of two columns (24 variants), all phase-free.
// ---------------------------------------------------------------------------

using Key = std::array<int, 6>;

struct KeyHash {
    size_t operator()(const Key& k) const {
        size_t h = 1469598103934665603ull;
        for (int v : k) {
            h ^= static_cast<size_t>(static_cast<unsigned>(v));
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct Cache {
    std::shared_mutex mtx;
    std::unordered_map<Key, WignerValue, KeyHash> map;
};

Cache& cache_3j() { static Cache c; return c; }
Cache& cache_6j() { static Cache c; return c; }

// Returns canonical key and whether an odd number of phase-carrying ops is needed.
std::pair<Key, bool> canonical_3j(const Key& in) {
    static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                    {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    Key best{};
    bool best_odd = false;
    bool first = true;
    for (int p = 0; p < 6; ++p) {
        const bool perm_odd = p >= 3;
        for (int neg = 0; neg < 2; ++neg) {
            Key k;
            for (int c = 0; c < 3; ++c) {
                k[c] = in[perms[p][c]];
                k[3 + c] = neg ? -in[3 + perms[p][c]] : in[3 + perms[p][c]];
            }
            const bool odd = perm_odd ^ (neg != 0);
            if (first || k < best) {
                best = k;
                best_odd = odd;
                first = false;
            }
        }
    }
    return {best, best_odd};
}

Key canonical_6j(const Key& in) {
    static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                    {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    // Which pairs of columns get their upper/lower rows swapped.
    static const int flips[4][3] = {{0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
    Key best{};
    bool first = true;
    for (auto& perm : perms) {
        for (auto& flip : flips) {
            Key k;
            for (int c = 0; c < 3; ++c) {
                int src = perm[c];
                k[c] = flip[c] ? in[3 + src] : in[src];
                k[3 + c] = flip[c] ? in[src] : in[3 + src];
            }
            if (first || k < best) {
                best = k;
                first = false;
            }
        }
    }
    return best;
}

WignerValue negate(WignerValue v) {
    v.value = -v.value;
    if (v.exact) v.exact->sign = -v.exact->sign;
    return v;
}

WignerValue lookup_or_compute(Cache& cache, const Key& key, auto compute) {
    {
        std::shared_lock lock(cache.mtx);
        auto it = cache.map.find(key);
        if (it != cache.map.end()) return it->second;
    }
    WignerValue v = compute();
    std::unique_lock lock(cache.mtx);
    return cache.map.try_emplace(key, std::move(v)).first->second;
}

}  // namespace

WignerValue wigner3j(HalfInt j1, HalfInt j2, HalfInt j3,
                     HalfInt m1, HalfInt m2, HalfInt m3) {
    if (!selection_3j(j1, j2, j3, m1, m2, m3)) return {0.0, ExactSqrt{}};

    Key key{j1.twice(), j2.twice(), j3.twice(), m1.twice(), m2.twice(), m3.twice()};
    auto [ckey, odd] = canonical_3j(key);
    WignerValue v = lookup_or_compute(cache_3j(), ckey, [&] {
        ExactSqrt e = exact_3j(HalfInt::from_twice(ckey[0]), HalfInt::from_twice(ckey[1]),
                               HalfInt::from_twice(ckey[2]), HalfInt::from_twice(ckey[3]),
                               HalfInt::from_twice(ckey[4]), HalfInt::from_twice(ckey[5]));
        return WignerValue{e.to_double(), std::move(e)};
    });
    if (odd && phase(j1 + j2 + j3) < 0) v = negate(v);
    return v;
}

WignerValue wigner6j(HalfInt j1, HalfInt j2, HalfInt j3,
                     HalfInt l1, HalfInt l2, HalfInt l3) {
    if (!selection_6j(j1, j2, j3, l1, l2, l3)) return {0.0, ExactSqrt{}};

    Key key{j1.twice(), j2.twice(), j3.twice(), l1.twice(), l2.twice(), l3.twice()};
    Key ckey = canonical_6j(key);
    return lookup_or_compute(cache_6j(), ckey, [&] {
        ExactSqrt e = exact_6j(HalfInt::from_twice(ckey[0]), HalfInt::from_twice(ckey[1]),
                               HalfInt::from_twice(ckey[2]), HalfInt::from_twice(ckey[3]),
                               HalfInt::from_twice(ckey[4]), HalfInt::from_twice(ckey[5]));
        return WignerValue{e.to_double(), std::move(e)};
    });
}

double wigner3j_fp(HalfInt j1, HalfInt j2, HalfInt j3,
                   HalfInt m1, HalfInt m2, HalfInt m3) {
    if (!selection_3j(j1, j2, j3, m1, m2, m3)) return 0.0;

    const int a1 = tri_int(j1, j2, j3);
    const int a2 = tri_int(j1, j3, j2);
    const int a3 = tri_int(j2, j3, j1);
    const int per = (j1 + j2 + j3).as_int();
    const int j1mm1 = (j1 - m1).as_int(), j2pm2 = (j2 + m2).as_int();
    const int b1 = (j3 - j2 + m1).as_int();
    const int b2 = (j3 - j1 - m2).as_int();

    long double pref = dbl_factorial(a1) * dbl_factorial(a2) * dbl_factorial(a3) / dbl_factorial(per + 1);
    pref *= dbl_factorial((j1 + m1).as_int()) * dbl_factorial(j1mm1);
    pref *= dbl_factorial(j2pm2) * dbl_factorial((j2 - m2).as_int());
    pref *= dbl_factorial((j3 + m3).as_int()) * dbl_factorial((j3 - m3).as_int());

    const int kmin = std::max({0, -b1, -b2});
    const int kmax = std::min({a1, j1mm1, j2pm2});
    long double sum = 0.0L;
    for (int k = kmin; k <= kmax; ++k) {
        long double den = dbl_factorial(k) * dbl_factorial(a1 - k) * dbl_factorial(j1mm1 - k) *
                          dbl_factorial(j2pm2 - k) * dbl_factorial(b1 + k) * dbl_factorial(b2 + k);
        sum += (k % 2 == 0 ? 1.0L : -1.0L) / den;
    }
    return static_cast<double>(phase(j1 - j2 - m3) * std::sqrt(pref) * sum);
}

double wigner6j_fp(HalfInt j1, HalfInt j2, HalfInt j3,
                   HalfInt l1, HalfInt l2, HalfInt l3) {
    if (!selection_6j(j1, j2, j3, l1, l2, l3)) return 0.0;

    auto delta = [](HalfInt a, HalfInt b, HalfInt c) {
        return dbl_factorial(tri_int(a, b, c)) * dbl_factorial(tri_int(a, c, b)) *
               dbl_factorial(tri_int(b, c, a)) / dbl_factorial((a + b + c).as_int() + 1);
    };
    const long double pref = std::sqrt(delta(j1, j2, j3) * delta(j1, l2, l3) *
                                       delta(l1, j2, l3) * delta(l1, l2, j3));

    const int s1 = (j1 + j2 + j3).as_int();
    const int s2 = (j1 + l2 + l3).as_int();
    const int s3 = (l1 + j2 + l3).as_int();
    const int s4 = (l1 + l2 + j3).as_int();
    const int p1 = (j1 + j2 + l1 + l2).as_int();
    const int p2 = (j2 + j3 + l2 + l3).as_int();
    const int p3 = (j3 + j1 + l3 + l1).as_int();

    long double sum = 0.0L;
    for (int k = std::max({s1, s2, s3, s4}); k <= std::min({p1, p2, p3}); ++k) {
        long double den = dbl_factorial(k - s1) * dbl_factorial(k - s2) * dbl_factorial(k - s3) *
                          dbl_factorial(k - s4) * dbl_factorial(p1 - k) * dbl_factorial(p2 - k) *
                          dbl_factorial(p3 - k);
        sum += (k % 2 == 0 ? 1.0L : -1.0L) * dbl_factorial(k + 1) / den;
    }
    return static_cast<double>(pref * sum);
}

double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2,
                      HalfInt j3, HalfInt m3) {
    if (!triangle_ok(j1, j2, j3) || (m1 + m2 - m3).twice() != 0) return 0.0;
    double v = wigner3j(j1, j2, j3, m1, m2, -m3).value;
    if (v == 0.0) return 0.0;
    return phase(j1 - j2 + m3) * std::sqrt(j3.twice() + 1.0) * v;
}

double reduced_rotation(HalfInt j, HalfInt m, HalfInt mp, double beta) {
    if (!valid_projection(j, m) || !valid_projection(j, mp)) return 0.0;

    const int jpm = (j + m).as_int(), jmm = (j - m).as_int();
    const int jpmp = (j + mp).as_int(), jmmp = (j - mp).as_int();
    const int mmmp = (m - mp).as_int();
    const int twoj = j.twice();

    const long double c = std::cos(0.5L * static_cast<long double>(beta));
    const long double s = std::sin(0.5L * static_cast<long double>(beta));
    const long double pref = std::sqrt(dbl_factorial(jpm) * dbl_factorial(jmm) *
                                       dbl_factorial(jpmp) * dbl_factorial(jmmp));

    long double sum = 0.0L;
    for (int k = std::max(0, -mmmp); k <= std::min(jpmp, jmm); ++k) {
        long double den = dbl_factorial(jpmp - k) * dbl_factorial(k) * dbl_factorial(mmmp + k) *
                          dbl_factorial(jmm - k);
        long double term =
            std::pow(c, twoj + (mp - m).as_int() - 2 * k) * std::pow(s, mmmp + 2 * k) / den;
        sum += ((mmmp + k) % 2 == 0 ? 1.0L : -1.0L) * term;
    }
    return static_cast<double>(pref * sum);
}

void clear_wigner_cache() {
    {
        std::unique_lock lock(cache_3j().mtx);
        cache_3j().map.clear();
    }
    std::unique_lock lock(cache_6j().mtx);
    cache_6j().map.clear();
}

}  // namespace hydropol
