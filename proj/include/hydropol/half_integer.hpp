#pragma once

#include <compare>
#include <cstdlib>
#include <string>

namespace hydropol {

// Angular momentum quantum number stored as twice its value, so integer and
// half-integer momenta are represented exactly.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int t) { return HalfInt(t, 0); }
    static constexpr HalfInt whole(int n) { return HalfInt(2 * n, 0); }

    constexpr int twice() const { return t_; }
    constexpr bool is_integer() const { return t_ % 2 == 0; }
    // Valid only for integer values.
    constexpr int as_int() const { return t_ / 2; }
    constexpr double value() const { return 0.5 * t_; }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.t_ + b.t_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.t_ - b.t_); }
    constexpr HalfInt operator-() const { return from_twice(-t_); }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;

    friend constexpr HalfInt abs(HalfInt a) { return from_twice(a.t_ < 0 ? -a.t_ : a.t_); }

    std::string str() const {
        if (is_integer()) return std::to_string(t_ / 2);
        return std::to_string(t_) + "/2";
    }

private:
    constexpr HalfInt(int t, int) : t_(t) {}
    int t_ = 0;
};

// |m| <= j with matching parity (j+m integer).
constexpr bool valid_projection(HalfInt j, HalfInt m) {
    return abs(m) <= j && (j + m).is_integer();
}

// Triangle rule including the integer-perimeter requirement.
constexpr bool triangle_ok(HalfInt a, HalfInt b, HalfInt c) {
    return (a + b + c).is_integer() && abs(a - b) <= c && c <= a + b;
}

// (-1)^k for an exactly integer HalfInt sum k; callers must guarantee integrality.
constexpr int phase(HalfInt k) { return k.as_int() % 2 == 0 ? 1 : -1; }

}  // namespace hydropol
