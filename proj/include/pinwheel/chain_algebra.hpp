#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pinwheel/hj.hpp"
#include "pinwheel/rational.hpp"

// Accompanying numbers of an HJ expansion and the intersection algebra of
// sphere chains. For n/a = [b1,...,bm] the sequences
//   e0 = 0, e1 = 1, e_{i+1} = b_i e_i - e_{i-1}
//   f0 = n, f1 = a, f_{i+1} = b_i f_i - f_{i-1}
// satisfy e_m = [a]^-1 mod n, e_{m+1} = n, f_m = 1, f_{m+1} = 0, and give the
// chain's inverse intersection matrix in closed form: (M^-1)_ij = -e_i f_j / n
// for i <= j.

namespace pinwheel {

struct AccompanyingNumbers {
    i64 n = 0;
    i64 a = 0;
    std::vector<i64> e; // indices 0..m+1
    std::vector<i64> f;

    std::size_t m() const { return e.size() - 2; }
};

inline AccompanyingNumbers accompanying(const ContinuedFraction& cf, i64 n, i64 a) {
    if (cf.coeffs.empty()) throw std::domain_error("accompanying numbers need a nonempty word");
    if (hj_expand(n, a).coeffs != cf.coeffs)
        throw std::domain_error("word is not the expansion of n/a");
    const std::size_t m = cf.coeffs.size();
    AccompanyingNumbers acc;
    acc.n = n;
    acc.a = a;
    acc.e.assign(m + 2, 0);
    acc.f.assign(m + 2, 0);
    acc.e[1] = 1;
    acc.f[0] = n;
    acc.f[1] = a;
    for (std::size_t i = 1; i <= m; ++i) {
        acc.e[i + 1] = checked_i64(i128(cf.coeffs[i - 1]) * acc.e[i] - acc.e[i - 1]);
        acc.f[i + 1] = checked_i64(i128(cf.coeffs[i - 1]) * acc.f[i] - acc.f[i - 1]);
    }
    if (acc.e[m + 1] != n || acc.f[m] != 1 || acc.f[m + 1] != 0)
        throw std::logic_error("accompanying recursion violates its extremal values");
    if (acc.e[m] != mod_inverse(a, n))
        throw std::logic_error("e_m is not the inverse of a mod n");
    for (std::size_t i = 1; i <= m; ++i) {
        if (acc.e[i + 1] <= acc.e[i]) throw std::logic_error("e must increase strictly");
        if (acc.f[i] <= acc.f[i + 1]) throw std::logic_error("f must decrease strictly");
        if (gcd_i64(acc.e[i], acc.e[i + 1]) != 1 || gcd_i64(acc.f[i], acc.f[i + 1]) != 1)
            throw std::logic_error("consecutive accompanying numbers must be coprime");
    }
    for (std::size_t i = 0; i <= m; ++i) {
        i128 det = i128(acc.e[i + 1]) * acc.f[i] - i128(acc.e[i]) * acc.f[i + 1];
        if (det != n) throw std::logic_error("accompanying determinant identity fails");
    }
    // The companion identity e_i f_i - e_{i-1} f_{i+1} = a holds at i = 1
    // (it reduces to f_1 = a) but fails for i >= 2 on concrete chains; see
    // second_identity_table for the diagnostic values.
    if (acc.f[1] != a) throw std::logic_error("f_1 must equal a");
    return acc;
}

inline AccompanyingNumbers accompanying(i64 n, i64 a) {
    return accompanying(hj_expand(n, a), n, a);
}

// Left-hand sides e_i f_i - e_{i-1} f_{i+1} for i = 1..m. Equals a at i = 1;
// the values for i >= 2 are tabulated so the mismatch is visible, not hidden.
inline std::vector<i64> second_identity_table(const AccompanyingNumbers& acc) {
    std::vector<i64> lhs;
    for (std::size_t i = 1; i <= acc.m(); ++i)
        lhs.push_back(checked_i64(i128(acc.e[i]) * acc.f[i] - i128(acc.e[i - 1]) * acc.f[i + 1]));
    return lhs;
}

struct SphereChain {
    enum class Role { wahl, divisor_tail, generic };
    std::vector<i64> selfints; // sphere i meets sphere i+1 once; no other pairs meet
    Role role = Role::generic;
};

inline SphereChain chain_from_word(const ContinuedFraction& cf,
                                   SphereChain::Role role = SphereChain::Role::generic) {
    SphereChain c;
    c.role = role;
    for (i64 b : cf.coeffs) c.selfints.push_back(-b);
    return c;
}

struct RationalMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> a;

    RationalMatrix() = default;
    RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    Rational& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
        return m;
    }

    bool is_symmetric() const {
        if (rows != cols) return false;
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = i + 1; j < cols; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

    friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
        if (x.cols != y.rows) throw std::domain_error("matrix product dimension mismatch");
        RationalMatrix r(x.rows, y.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t k = 0; k < x.cols; ++k) {
                if (x.at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < y.cols; ++j)
                    r.at(i, j) += x.at(i, k) * y.at(k, j);
            }
        return r;
    }
};

inline std::vector<Rational> operator*(const RationalMatrix& m, const std::vector<Rational>& v) {
    if (m.cols != v.size()) throw std::domain_error("matrix-vector dimension mismatch");
    std::vector<Rational> r(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m.at(i, j) * v[j];
    return r;
}

inline RationalMatrix intersection_matrix(const SphereChain& chain) {
    const std::size_t m = chain.selfints.size();
    RationalMatrix mat(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        mat.at(i, i) = Rational(chain.selfints[i]);
        if (i + 1 < m) {
            mat.at(i, i + 1) = Rational(1);
            mat.at(i + 1, i) = Rational(1);
        }
    }
    return mat;
}

// (M^-1)_ij = -e_i f_j / n for i <= j, extended symmetrically.
inline RationalMatrix inverse_closed_form(const AccompanyingNumbers& acc) {
    const std::size_t m = acc.m();
    RationalMatrix inv(m, m);
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = i; j <= m; ++j) {
            Rational v = Rational(-checked_i64(i128(acc.e[i]) * acc.f[j]), acc.n);
            inv.at(i - 1, j - 1) = v;
            inv.at(j - 1, i - 1) = v;
        }
    return inv;
}

namespace detail {

// Bareiss condensation on the augmented matrix [M | B]. One-step divisions
// are exact at every scalar type; with integral input every intermediate
// entry is a minor of the augmented matrix, so nothing ever grows past the
// determinant scale. Throws on singular M.
inline void bareiss_solve_in_place(RationalMatrix& w, std::size_t n) {
    Rational prev(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && w.at(pivot, k).is_zero()) ++pivot;
        if (pivot == n) throw std::domain_error("matrix is singular");
        if (pivot != k)
            for (std::size_t j = 0; j < w.cols; ++j) std::swap(w.at(pivot, j), w.at(k, j));
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < w.cols; ++j)
                w.at(i, j) = (w.at(k, k) * w.at(i, j) - w.at(i, k) * w.at(k, j)) / prev;
            w.at(i, k) = Rational(0);
        }
        prev = w.at(k, k);
    }
    // Upper triangular now; eliminate upward and normalize the diagonal.
    for (std::size_t k = n; k-- > 0;) {
        Rational d = w.at(k, k);
        for (std::size_t j = k; j < w.cols; ++j) w.at(k, j) /= d;
        for (std::size_t i = 0; i < k; ++i) {
            Rational factor = w.at(i, k);
            if (factor.is_zero()) continue;
            for (std::size_t j = k; j < w.cols; ++j)
                w.at(i, j) -= factor * w.at(k, j);
        }
    }
}

} // namespace detail

inline RationalMatrix exact_inverse(const RationalMatrix& m) {
    if (m.rows != m.cols) throw std::domain_error("only square matrices invert");
    const std::size_t n = m.rows;
    RationalMatrix w(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w.at(i, j) = m.at(i, j);
        w.at(i, n + i) = Rational(1);
    }
    detail::bareiss_solve_in_place(w, n);
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = w.at(i, n + j);
    return inv;
}

inline std::vector<Rational> solve_profile(const RationalMatrix& m,
                                           const std::vector<Rational>& profile) {
    if (m.rows != m.cols || m.rows != profile.size())
        throw std::domain_error("profile solve dimension mismatch");
    const std::size_t n = m.rows;
    RationalMatrix w(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w.at(i, j) = m.at(i, j);
        w.at(i, n) = profile[i];
    }
    detail::bareiss_solve_in_place(w, n);
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = w.at(i, n);
    return x;
}

// k_j = -1 + (e_j + f_j)/n for j = 1..m. Wahl chains additionally have every
// k_j in (-1, 0]; generic chains need not.
inline std::vector<Rational> discrepancies(const AccompanyingNumbers& acc) {
    std::vector<Rational> k;
    for (std::size_t j = 1; j <= acc.m(); ++j)
        k.push_back(Rational(-1) + Rational(acc.e[j] + acc.f[j], acc.n));
    return k;
}

} // namespace pinwheel
