#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pinwheel/mat2.hpp"
#include "pinwheel/rational.hpp"

// Negative (Hirzebruch-Jung) continued fractions:
//   [b1,...,bm] = b1 - 1/(b2 - 1/(... - 1/bm)).
// A reduced n/a with 0 < a < n (or a = 1) has a unique expansion with all
// bi >= 2; words containing entries <= 1 appear as blow-up/blow-down states.

namespace pinwheel {

struct ContinuedFraction {
    std::vector<i64> coeffs;
    std::optional<Rational> value; // cached when known finite

    std::size_t size() const { return coeffs.size(); }
};

struct HJEvaluation {
    bool finite = true;
    Rational value;                    // meaningful iff finite
    std::size_t zero_suffix_begin = 0; // 1-based j with [b_j,...,b_m] = 0, iff !finite
};

// Right-to-left evaluation. If any suffix value hits 0 the word has no finite
// evaluation in the usual sense (either the whole word is a zero word, or a
// further step would divide by zero); a tagged marker is returned instead.
inline HJEvaluation hj_evaluate(const ContinuedFraction& cf) {
    if (cf.coeffs.empty()) throw std::domain_error("cannot evaluate an empty word");
    HJEvaluation out;
    Rational v(cf.coeffs.back());
    for (std::size_t i = cf.coeffs.size() - 1; i-- > 0;) {
        if (v.is_zero()) {
            out.finite = false;
            out.zero_suffix_begin = i + 2;
            return out;
        }
        v = Rational(cf.coeffs[i]) - Rational(1) / v;
    }
    if (v.is_zero()) {
        out.finite = false;
        out.zero_suffix_begin = 1;
        return out;
    }
    out.value = v;
    return out;
}

// Minimal expansion of n/a, all coefficients >= 2 (single [n] when a = 1).
// Step: b = ceil(n/a), then (n, a) <- (a, b*a - n).
inline ContinuedFraction hj_expand(const Rational& f) {
    if (f.num <= 0 || f.den <= 0 || f.num <= f.den)
        throw std::domain_error("expansion needs n/a with n > a >= 1");
    i64 n = f.num, a = f.den;
    ContinuedFraction cf;
    while (a > 0) {
        i64 b = (n + a - 1) / a;
        cf.coeffs.push_back(b);
        i64 next = checked_i64(i128(b) * a - n);
        n = a;
        a = next;
    }
    cf.value = f;
    return cf;
}

inline ContinuedFraction hj_expand(i64 n, i64 a) {
    if (a <= 0 || n <= a) throw std::domain_error("expansion needs n > a >= 1");
    if (gcd_i64(n, a) != 1) throw std::domain_error("expansion input must be reduced");
    return hj_expand(Rational(n, a));
}

// Dual expansion: p/q -> expansion of p/(p-q).
inline ContinuedFraction hj_dual(const Rational& f) {
    if (f.num <= f.den) throw std::domain_error("dual needs p > q >= 1");
    return hj_expand(Rational(f.num, f.num - f.den));
}

// Unique 0 < r < n with a*r = 1 mod n.
inline i64 mod_inverse(i64 a, i64 n) {
    if (n < 2) throw std::domain_error("modulus must be at least 2");
    if (a <= 0 || a >= n) throw std::domain_error("mod_inverse needs 0 < a < n");
    i64 old_r = a, r = n;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 qt = old_r / r;
        i64 tmp = old_r - qt * r;
        old_r = r;
        r = tmp;
        tmp = old_s - qt * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw std::domain_error("mod_inverse of non-coprime input");
    i64 inv = old_s % n;
    if (inv < 0) inv += n;
    return inv;
}

// Wahl chain data for p^2/(pq-1): the chain is spliced from the expansions
// of p/q = [x1..xr] and p/(p-q) = [y1..ys] as [x1,...,x_{r-1}, xr+ys, y_{s-1},...,y1].
struct WahlData {
    i64 p = 0;
    i64 q = 0;
    ContinuedFraction wahl; // expansion of p^2/(pq-1); empty for (1,1)
    ContinuedFraction xs;   // expansion of p/q
    ContinuedFraction ys;   // expansion of p/(p-q)
};

inline void require_wahl_pair(i64 p, i64 q) {
    if (p < 2 || q <= 0 || q >= p) throw std::domain_error("need 0 < q < p with p >= 2");
    if (gcd_i64(p, q) != 1) throw std::domain_error("p and q must be coprime");
}

inline WahlData wahl_chain(i64 p, i64 q) {
    if (p == 1 && q == 1) return {1, 1, {}, {}, {}}; // ball case: empty chain
    require_wahl_pair(p, q);
    WahlData w;
    w.p = p;
    w.q = q;
    w.xs = hj_expand(Rational(p, q));
    w.ys = hj_expand(Rational(p, p - q));
    const auto& x = w.xs.coeffs;
    const auto& y = w.ys.coeffs;
    std::vector<i64> spliced(x.begin(), x.end() - 1);
    spliced.push_back(x.back() + y.back());
    spliced.insert(spliced.end(), y.rbegin() + 1, y.rend());
    w.wahl.coeffs = std::move(spliced);
    w.wahl.value = Rational(checked_i64(i128(p) * p), checked_i64(i128(p) * q - 1));
    ContinuedFraction direct = hj_expand(*w.wahl.value);
    if (direct.coeffs != w.wahl.coeffs)
        throw std::logic_error("spliced Wahl chain disagrees with direct expansion");
    return w;
}

// Dual Wahl chain p^2/(p(p-q)+1) = [y1,...,ys, 2, xr,...,x1].
inline ContinuedFraction wahl_dual_chain(i64 p, i64 q) {
    require_wahl_pair(p, q);
    WahlData w = wahl_chain(p, q);
    std::vector<i64> spliced(w.ys.coeffs);
    spliced.push_back(2);
    spliced.insert(spliced.end(), w.xs.coeffs.rbegin(), w.xs.coeffs.rend());
    ContinuedFraction cf;
    cf.coeffs = std::move(spliced);
    cf.value = Rational(checked_i64(i128(p) * p), checked_i64(i128(p) * (p - q) + 1));
    ContinuedFraction direct = hj_expand(*cf.value);
    if (direct.coeffs != cf.coeffs)
        throw std::logic_error("spliced dual chain disagrees with direct expansion");
    return cf;
}

// Product of [[bi, -1], [1, 0]] over the word. For the minimal expansion of
// p/q this equals [[p, -[q]^-1], [q, (1 - q[q]^-1)/p]].
inline IntMat2 cf_matrix_product(const ContinuedFraction& cf) {
    IntMat2 m; // identity
    for (i64 b : cf.coeffs) m = m * IntMat2{b, -1, 1, 0};
    return m;
}

inline bool contract_is_interior(const ContinuedFraction& cf, std::size_t index1) {
    return index1 > 1 && index1 < cf.coeffs.size();
}

// Blow-down of the entry at 1-based index1, which must equal 1:
// (a, 1, b) -> (a-1, b-1); an end entry decrements its single neighbour.
inline ContinuedFraction contract_one(const ContinuedFraction& cf, std::size_t index1) {
    if (index1 == 0 || index1 > cf.coeffs.size())
        throw std::out_of_range("contraction index out of range");
    if (cf.coeffs[index1 - 1] != 1) throw std::domain_error("entry to contract must equal 1");
    ContinuedFraction out;
    out.coeffs = cf.coeffs;
    std::size_t i = index1 - 1;
    if (i > 0) out.coeffs[i - 1] -= 1;
    if (i + 1 < out.coeffs.size()) out.coeffs[i + 1] -= 1;
    out.coeffs.erase(out.coeffs.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
}

// True iff the word contracts to [0]. Canonical order: contract the leftmost
// interior 1 while one exists, then the leftmost end 1.
inline bool zero_cf_check(const ContinuedFraction& cf) {
    ContinuedFraction cur = cf;
    while (true) {
        if (cur.coeffs.size() == 1) return cur.coeffs[0] == 0;
        if (cur.coeffs.empty()) return false;
        std::size_t pick = 0;
        for (std::size_t i = 2; i < cur.coeffs.size(); ++i)
            if (cur.coeffs[i - 1] == 1) {
                pick = i;
                break;
            }
        if (pick == 0) {
            if (cur.coeffs.front() == 1) pick = 1;
            else if (cur.coeffs.back() == 1) pick = cur.coeffs.size();
            else return false;
        }
        cur = contract_one(cur, pick);
    }
}

} // namespace pinwheel
