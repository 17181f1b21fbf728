#pragma once

#include "chain_algebra.hpp"

#include <algorithm>
#include <optional>

namespace pinwheel {

// Unique d0 with (pq-1)*d0 < p^2 <= (pq-1)*(d0+1); equals the leading Wahl
// coefficient minus one.
inline i64 compute_d0(i64 p, i64 q) {
    require_wahl_pair(p, q);
    const i64 denom = checked_i64(i128(p) * q - 1);
    const i64 d0 = checked_i64((i128(p) * p - 1) / denom);
    if (!(i128(denom) * d0 < i128(p) * p && i128(p) * p <= i128(denom) * (d0 + 1)))
        throw std::logic_error("d0 bracket failed");
    return d0;
}

// Compactifying divisor D0..Dn: a linear chain with D0^2 = +d0 and Di^2 = -di,
// where [d1..dn] resolves 1/(pq-1)(1, [q^2]^{-1}).  For q = 1 the tail is the
// single sphere [p-1]; in particular (2,1) carries the chain (+3, -1).
struct CompactificationData {
    i64 p = 0;
    i64 q = 0;
    i64 d0 = 0;
    SphereChain divisor;   // self-intersections (+d0, -d1, ..., -dn)
    i64 dual_index_q2 = 0; // p^2 - d0(pq-1); inverts q^2 mod pq-1
    std::optional<std::size_t> distinguished_index; // 1-based slot in D1..Dn met by E

    std::size_t n() const { return divisor.selfints.size() - 1; }

    std::vector<i64> tail() const {
        std::vector<i64> t;
        for (std::size_t i = 1; i < divisor.selfints.size(); ++i)
            t.push_back(-divisor.selfints[i]);
        return t;
    }
};

namespace detail {

// Tail of the divisor read back to front equals [x1..xr, 2, ys..y_{j+1}, yj-1]
// with j the lowest index where the dual expansion leaves 2.  Returns that word
// together with the slot of the connecting 2 (1-based, = r+1).
struct ConnectedWord {
    std::vector<i64> word;
    std::size_t connecting = 0;
};

inline ConnectedWord resolution_word(i64 p, i64 q) {
    const auto xs = hj_expand(p, q).coeffs;
    const auto ys = hj_expand(p, p - q).coeffs;
    std::size_t j = 0;
    for (std::size_t i = 0; i < ys.size(); ++i)
        if (ys[i] != 2) {
            j = i + 1;
            break;
        }
    if (j == 0) throw std::logic_error("dual expansion is all 2s only when q = 1");
    ConnectedWord out;
    out.word = xs;
    out.word.push_back(2);
    out.connecting = xs.size() + 1;
    for (std::size_t i = ys.size(); i > j; --i) out.word.push_back(ys[i - 1]);
    out.word.push_back(ys[j - 1] - 1);
    return out;
}

} // namespace detail

inline CompactificationData compactifying_divisor(i64 p, i64 q) {
    CompactificationData c;
    c.p = p;
    c.q = q;
    c.d0 = compute_d0(p, q);
    const i64 denom = p * q - 1;
    c.dual_index_q2 = checked_i64(i128(p) * p - i128(c.d0) * denom);

    std::vector<i64> tail;
    if (q == 1) {
        tail = {p - 1};
    } else {
        if (!(0 < c.dual_index_q2 && c.dual_index_q2 < denom))
            throw std::logic_error("dual index out of range");
        if ((i128(q) * q * c.dual_index_q2 - 1) % denom != 0)
            throw std::logic_error("dual index does not invert q^2");
        tail = hj_expand(denom, c.dual_index_q2).coeffs;

        const auto cw = detail::resolution_word(p, q);
        std::vector<i64> reversed(tail.rbegin(), tail.rend());
        if (cw.word != reversed)
            throw std::logic_error("divisor tail disagrees with spliced resolution word");
        const std::size_t index = tail.size() - cw.connecting + 1;
        if (!(1 < index && index < tail.size()))
            throw std::logic_error("distinguished index must be interior");
        c.distinguished_index = index;
    }

    c.divisor.selfints.push_back(c.d0);
    for (i64 d : tail) c.divisor.selfints.push_back(-d);
    return c;
}

inline std::optional<std::size_t> distinguished_exceptional_index(i64 p, i64 q) {
    return compactifying_divisor(p, q).distinguished_index;
}

// Blow-down record from the compactification to the Hirzebruch surface F_{d0}.
// states[0] is the divisor tail back to front with the sphere met by E already
// contracted (so the connecting 2 reads 1); each step removes the unique
// interior 1 until the chain reads [d0+1, 1, 1]; the last step removes the 1
// adjacent to the nascent negative section, leaving [d0, 0].
struct BlowdownTrace {
    std::vector<std::vector<i64>> states;
    std::vector<std::size_t> contracted; // 1-based slot removed at each step
    std::size_t final_choice = 0;        // slot removed by the last step, 0 if trivial
    i64 hirzebruch_degree = 0;
};

inline BlowdownTrace blowdown_to_hirzebruch(i64 p, i64 q) {
    const auto data = compactifying_divisor(p, q);
    BlowdownTrace t;
    t.hirzebruch_degree = data.d0;
    if (q == 1) return t; // already a ruled surface, nothing contracts

    auto cw = detail::resolution_word(p, q);
    cw.word[cw.connecting - 1] = 1;
    ContinuedFraction cur;
    cur.coeffs = cw.word;
    t.states.push_back(cur.coeffs);

    while (!(cur.coeffs.size() == 3 && cur.coeffs[1] == 1 && cur.coeffs[2] == 1)) {
        std::size_t pick = 0;
        for (std::size_t i = 2; i < cur.coeffs.size(); ++i)
            if (cur.coeffs[i - 1] == 1) {
                if (pick != 0) throw std::logic_error("interior 1 is not unique");
                pick = i;
            }
        if (pick == 0) throw std::logic_error("no interior 1 before terminal state");
        cur = contract_one(cur, pick);
        t.contracted.push_back(pick);
        t.states.push_back(cur.coeffs);
    }

    t.final_choice = 2; // the 1 touching the negative section; the other becomes the fibre
    cur = contract_one(cur, t.final_choice);
    t.contracted.push_back(t.final_choice);
    t.states.push_back(cur.coeffs);
    if (cur.coeffs != std::vector<i64>{data.d0, 0})
        throw std::logic_error("blow-down did not terminate at [d0, 0]");
    return t;
}

inline RationalMatrix divisor_matrix(const CompactificationData& c) {
    return intersection_matrix(c.divisor);
}

inline RationalMatrix divisor_tail_matrix(const CompactificationData& c) {
    SphereChain tail;
    tail.role = SphereChain::Role::divisor_tail;
    tail.selfints.assign(c.divisor.selfints.begin() + 1, c.divisor.selfints.end());
    return intersection_matrix(tail);
}

inline RationalMatrix divisor_tail_inverse(const CompactificationData& c) {
    if (c.n() == 1) {
        RationalMatrix inv(1, 1);
        inv.at(0, 0) = Rational(-1) / Rational(c.tail()[0]);
        return inv;
    }
    return inverse_closed_form(accompanying(c.p * c.q - 1, c.dual_index_q2));
}

// First column of -(pq-1) * inverse(M_tail); entrywise positive.
inline std::vector<Rational> schur_column(const CompactificationData& c) {
    const auto inv = divisor_tail_inverse(c);
    const Rational scale(-(c.p * c.q - 1));
    std::vector<Rational> v(c.n());
    for (std::size_t i = 0; i < c.n(); ++i) v[i] = scale * inv.at(i, 0);
    return v;
}

namespace detail {

inline RationalMatrix assemble_schur_inverse(const CompactificationData& c,
                                             const std::vector<Rational>& v) {
    const auto tail_inv = divisor_tail_inverse(c);
    const std::size_t n = c.n();
    const Rational p2(c.p * c.p);
    const Rational denom(c.p * c.q - 1);
    RationalMatrix inv(n + 1, n + 1);
    inv.at(0, 0) = denom / p2;
    for (std::size_t i = 0; i < n; ++i) {
        inv.at(0, i + 1) = v[i] / p2;
        inv.at(i + 1, 0) = v[i] / p2;
        for (std::size_t j = 0; j < n; ++j)
            inv.at(i + 1, j + 1) = tail_inv.at(i, j) + v[i] * v[j] / (denom * p2);
    }
    return inv;
}

} // namespace detail

// Block inverse of the full divisor matrix via the Schur complement of its
// tail.  The plain closed form carries the edge column -(pq-1) M_tail^{-1} e1;
// negating it (entrywise positive) is what direct inversion produces, so both
// assemblies are exposed for the audit.
struct SchurAudit {
    RationalMatrix corrected;
    RationalMatrix as_printed;
    RationalMatrix ground_truth;
    bool corrected_matches = false;
    bool printed_matches = false;
};

inline RationalMatrix divisor_inverse(const CompactificationData& c) {
    return detail::assemble_schur_inverse(c, schur_column(c));
}

inline SchurAudit schur_inverse_audit(const CompactificationData& c) {
    SchurAudit audit;
    auto v = schur_column(c);
    audit.corrected = detail::assemble_schur_inverse(c, v);
    for (auto& x : v) x = -x;
    audit.as_printed = detail::assemble_schur_inverse(c, v);
    audit.ground_truth = exact_inverse(divisor_matrix(c));
    audit.corrected_matches = audit.corrected == audit.ground_truth;
    audit.printed_matches = audit.as_printed == audit.ground_truth;
    return audit;
}

} // namespace pinwheel
