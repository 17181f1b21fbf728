#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pinwheel {

using i64 = long long;
using i128 = __int128;

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

inline i128 gcd128(i128 a, i128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 checked_i64(i128 x) {
    if (x > i128(INT64_MAX) || x < i128(INT64_MIN))
        throw std::overflow_error("rational arithmetic exceeds 64-bit range");
    return static_cast<i64>(x);
}

// Exact rational number. Always stored reduced with den > 0.
// Intermediate products are taken in 128 bits; results must fit in 64.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {}
    Rational(i64 n, i64 d) { *this = make(n, d); }

    static Rational make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        Rational r;
        r.num = checked_i64(n);
        r.den = checked_i64(d);
        return r;
    }

    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    Rational operator-() const {
        Rational r;
        r.num = -num;
        r.den = den;
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num) * b.num, i128(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::domain_error("rational division by zero");
        return make(i128(a.num) * b.den, i128(a.den) * b.num);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num) * b.den < i128(b.num) * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num < 0 ? -*this : *this; }

    // Exact value as double; used only by the floating-point local models.
    double to_double() const { return double(num) / double(den); }

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

inline i64 gcd_i64(i64 a, i64 b) { return checked_i64(gcd128(a, b)); }

} // namespace pinwheel
