#pragma once

#include <stdexcept>

#include "pinwheel/rational.hpp"

namespace pinwheel {

struct IntVec2 {
    i64 x = 0;
    i64 y = 0;

    friend bool operator==(const IntVec2&, const IntVec2&) = default;
    friend IntVec2 operator+(IntVec2 a, IntVec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend IntVec2 operator-(IntVec2 a, IntVec2 b) { return {a.x - b.x, a.y - b.y}; }
    IntVec2 operator-() const { return {-x, -y}; }
};

inline i64 det2(IntVec2 u, IntVec2 v) {
    return checked_i64(i128(u.x) * v.y - i128(u.y) * v.x);
}

inline bool is_primitive(IntVec2 v) {
    if (v.x == 0 && v.y == 0) return false;
    return gcd_i64(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y) == 1;
}

inline IntVec2 primitive_part(IntVec2 v) {
    if (v.x == 0 && v.y == 0) throw std::domain_error("zero vector has no direction");
    i64 g = gcd_i64(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y);
    return {v.x / g, v.y / g};
}

// Row-major 2x2 integer matrix [[a, b], [c, d]].
struct IntMat2 {
    i64 a = 1, b = 0, c = 0, d = 1;

    friend bool operator==(const IntMat2&, const IntMat2&) = default;

    friend IntMat2 operator*(const IntMat2& m, const IntMat2& n) {
        IntMat2 r;
        r.a = checked_i64(i128(m.a) * n.a + i128(m.b) * n.c);
        r.b = checked_i64(i128(m.a) * n.b + i128(m.b) * n.d);
        r.c = checked_i64(i128(m.c) * n.a + i128(m.d) * n.c);
        r.d = checked_i64(i128(m.c) * n.b + i128(m.d) * n.d);
        return r;
    }

    IntVec2 apply(IntVec2 v) const {
        return {checked_i64(i128(a) * v.x + i128(b) * v.y),
                checked_i64(i128(c) * v.x + i128(d) * v.y)};
    }

    i64 det() const { return checked_i64(i128(a) * d - i128(b) * c); }
    i64 trace() const { return checked_i64(i128(a) + d); }

    // Inverse of a unimodular matrix (det = +-1) stays integral.
    IntMat2 unimodular_inverse() const {
        i64 dt = det();
        if (dt != 1 && dt != -1) throw std::domain_error("matrix is not unimodular");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

struct QVec2 {
    Rational x;
    Rational y;

    friend bool operator==(const QVec2&, const QVec2&) = default;
    friend QVec2 operator+(const QVec2& a, const QVec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend QVec2 operator-(const QVec2& a, const QVec2& b) { return {a.x - b.x, a.y - b.y}; }
};

inline QVec2 scale(const Rational& s, IntVec2 v) { return {s * Rational(v.x), s * Rational(v.y)}; }

inline QVec2 apply(const IntMat2& m, const QVec2& v) {
    return {Rational(m.a) * v.x + Rational(m.b) * v.y,
            Rational(m.c) * v.x + Rational(m.d) * v.y};
}

} // namespace pinwheel
