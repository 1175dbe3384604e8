#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace expframe {

/// Exact rational with int64 numerator/denominator, normalized, den > 0.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool isZero() const { return num == 0; }
    Rational operator-() const { return {-num, den}; }
    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator-(const Rational& o) const { return {num * o.den - o.num * den, den * o.den}; }
    Rational operator*(const Rational& o) const { return {num * o.num, den * o.den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Parse "p", "p/q" or a plain decimal like "0.25" into an exact rational.
/// Returns false when the token is not an exact small rational.
bool parseRational(const std::string& s, Rational& out);

/// Exact sign of a + b*sqrt(d) for rationals a, b and nonsquare d >= 2.
/// Used for model-set acceptance tests, which flip on exact comparisons.
inline int signQuad(const Rational& a, const Rational& b, long long d) {
    auto sgn = [](long long v) { return v > 0 ? 1 : v < 0 ? -1 : 0; };
    int sa = sgn(a.num), sb = sgn(b.num);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // compare a^2 vs b^2 d with exact integer arithmetic
    __int128 lhs = static_cast<__int128>(a.num) * a.num * b.den * b.den;
    __int128 rhs = static_cast<__int128>(b.num) * b.num * a.den * a.den * d;
    if (lhs == rhs) throw std::logic_error("signQuad: d must be nonsquare");
    // sign(a + b sqrt d) = sign(a) iff |a| > |b| sqrt(d)
    return lhs > rhs ? sa : sb;
}

inline bool isPerfectSquare(long long d) {
    if (d < 0) return false;
    auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(d))));
    for (long long c = r - 2; c <= r + 2; ++c)
        if (c >= 0 && c * c == d) return true;
    return false;
}

}  // namespace expframe
