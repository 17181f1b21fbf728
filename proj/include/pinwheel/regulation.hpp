#pragma once

// Homology calculus for the compactified rational blow-down setup.  After
// compactifying, the Wahl chain C_1..C_m and the divisor D_0..D_n form a
// rational basis of second homology; one ruling fibre F is kept implicit
// through its fixed incidences F.D_0 = F.D_n = 1, F.F = 0, F.C_j = 0.  This
// header computes exact pairings and adjunction defects on that basis,
// certifies that a square-zero sphere class meeting the chain does so only
// through C_1, solves for the multiplicities of the broken ruling fibre, and
// simulates the blow-downs onto the minimal Hirzebruch model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chain_algebra.hpp"
#include "compactify.hpp"
#include "hj.hpp"
#include "rational.hpp"

namespace pinwheel {

// Chain data of one compactified picture.  The divisor side always belongs to
// the ambient pair (p,q); the chain side may carry a different Wahl pair when
// studying pinwheels embedded in another ball, and equals (p,q) otherwise.
struct BlowupBasis {
    i64 ambient_p = 0;
    i64 ambient_q = 0;
    i64 chain_p = 0;
    i64 chain_q = 0;

    CompactificationData comp; // divisor (+d0, -d1..-dn) of the ambient pair
    ContinuedFraction wahl;    // chain word [b1..bm] of the chain pair

    RationalMatrix M_D;     // (n+1)x(n+1), top-left +d0
    RationalMatrix M_C;     // m x m, diagonal -b_j
    RationalMatrix M_D_inv; // exact closed-form inverses
    RationalMatrix M_C_inv;

    std::optional<AccompanyingNumbers> acc_D; // of (pq-1)/[q^2]^{-1}; absent for (2,1)
    AccompanyingNumbers acc_C;                // of cp^2/(cp*cq - 1)
    std::vector<Rational> k;                  // discrepancies over C_1..C_m

    std::size_t m() const { return wahl.size(); }
    std::size_t n() const { return comp.n(); }
};

inline BlowupBasis make_basis(i64 p, i64 q, i64 chain_p, i64 chain_q) {
    require_wahl_pair(p, q);
    require_wahl_pair(chain_p, chain_q);
    BlowupBasis b;
    b.ambient_p = p;
    b.ambient_q = q;
    b.chain_p = chain_p;
    b.chain_q = chain_q;
    b.comp = compactifying_divisor(p, q);
    b.wahl = wahl_chain(chain_p, chain_q).wahl;
    b.M_D = divisor_matrix(b.comp);
    b.M_D_inv = divisor_inverse(b.comp);
    b.M_C = intersection_matrix(chain_from_word(b.wahl, SphereChain::Role::wahl));
    b.acc_C = accompanying(b.wahl, checked_i64(i128(chain_p) * chain_p),
                           checked_i64(i128(chain_p) * chain_q - 1));
    b.M_C_inv = inverse_closed_form(b.acc_C);
    b.k = discrepancies(b.acc_C);
    const i64 denom = checked_i64(i128(p) * q - 1);
    if (denom >= 2)
        b.acc_D = accompanying(hj_expand(denom, b.comp.dual_index_q2), denom,
                               b.comp.dual_index_q2);
    return b;
}

inline BlowupBasis make_basis(i64 p, i64 q) { return make_basis(p, q, p, q); }

// A second-homology class written in the sphere basis: a over D_0..D_n, c over
// C_1..C_m, plus a multiple of the implicit fibre F.  ambient_part is a spare
// slot for splitting arguments that peel off a multiple of the ball summand;
// it never enters the pairings.
struct HomologyClass {
    std::vector<Rational> a;
    std::vector<Rational> c;
    Rational fibre_mult = Rational(0);
    std::optional<Rational> ambient_part;
};

namespace detail {
inline void check_class_dims(const BlowupBasis& b, const HomologyClass& cls) {
    if (cls.a.size() != b.n() + 1 || cls.c.size() != b.m())
        throw std::invalid_argument("class coefficients do not match the basis dimensions");
}
} // namespace detail

// Builds the class with prescribed pairing profiles xi = M_D a and chi = M_C c.
inline HomologyClass class_from_profile(const BlowupBasis& b,
                                        const std::vector<Rational>& xi,
                                        const std::vector<Rational>& chi,
                                        const Rational& fibre_mult = Rational(0)) {
    if (xi.size() != b.n() + 1 || chi.size() != b.m())
        throw std::invalid_argument("profile lengths do not match the basis dimensions");
    HomologyClass cls;
    cls.a = b.M_D_inv * xi;
    cls.c = b.M_C_inv * chi;
    cls.fibre_mult = fibre_mult;
    return cls;
}

inline std::vector<Rational> profile_D(const BlowupBasis& b, const HomologyClass& cls) {
    detail::check_class_dims(b, cls);
    return b.M_D * cls.a;
}

inline std::vector<Rational> profile_C(const BlowupBasis& b, const HomologyClass& cls) {
    detail::check_class_dims(b, cls);
    return b.M_C * cls.c;
}

// K = -F - (D_0 + ... + D_n) + k_1 C_1 + ... + k_m C_m.
inline HomologyClass canonical_class(const BlowupBasis& b) {
    HomologyClass cls;
    cls.a.assign(b.n() + 1, Rational(-1));
    cls.c = b.k;
    cls.fibre_mult = Rational(-1);
    return cls;
}

// Full intersection pairing.  The fibre contributes through its incidences
// with the divisor ends only; F.F = 0 kills the phi_A * phi_B term.
inline Rational pairing(const BlowupBasis& b, const HomologyClass& A, const HomologyClass& B) {
    detail::check_class_dims(b, A);
    detail::check_class_dims(b, B);
    std::vector<Rational> xiB = b.M_D * B.a;
    std::vector<Rational> chiB = b.M_C * B.c;
    Rational total(0);
    for (std::size_t i = 0; i < A.a.size(); ++i) total += A.a[i] * xiB[i];
    for (std::size_t j = 0; j < A.c.size(); ++j) total += A.c[j] * chiB[j];
    total += A.fibre_mult * (B.a.front() + B.a.back());
    total += B.fibre_mult * (A.a.front() + A.a.back());
    return total;
}

inline Rational pairing_self(const BlowupBasis& b, const HomologyClass& cls) {
    return pairing(b, cls, cls);
}

// K.A; for fibre_mult = 0 this reduces to -a_0 - a_n - sum(xi) + k.chi.
inline Rational pairing_canonical(const BlowupBasis& b, const HomologyClass& cls) {
    return pairing(b, canonical_class(b), cls);
}

// Total singularity defect of a rational sphere representative: zero for an
// embedded sphere, strictly negative when the adjunction count has slack.
inline Rational adjunction_defect(const BlowupBasis& b, const HomologyClass& cls) {
    return (pairing_self(b, cls) + pairing_canonical(b, cls)) / Rational(2) + Rational(1);
}

namespace detail {

// Visits every nonnegative chi over chain indices 1..m with total weight <= 3,
// as a sparse index/weight list sorted by index.  One unit of weight already
// costs about 1/2 in the adjunction budget, so heavier profiles cannot reach
// defect zero and the bound is exhaustive for the uniqueness question.
template <typename Visit>
inline void for_each_small_chi(std::size_t m, Visit&& visit) {
    std::vector<std::pair<std::size_t, i64>> s;
    for (std::size_t j = 1; j <= m; ++j)
        for (i64 w = 1; w <= 3; ++w) {
            s.assign({{j, w}});
            visit(s);
        }
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = i + 1; j <= m; ++j)
            for (auto [wi, wj] : {std::pair<i64, i64>{1, 1}, {1, 2}, {2, 1}}) {
                s.assign({{i, wi}, {j, wj}});
                visit(s);
            }
    for (std::size_t i = 1; i <= m; ++i)
        for (std::size_t j = i + 1; j <= m; ++j)
            for (std::size_t l = j + 1; l <= m; ++l) {
                s.assign({{i, 1}, {j, 1}, {l, 1}});
                visit(s);
            }
}

} // namespace detail

struct UniqueIntersectionReport {
    i64 p = 0;
    i64 q = 0;
    bool unique = false;
    // Chain slots j where (e_j - 1)(f_j - 1) = 0 and e_j f_j = pq - 1 both
    // hold; the defect and square-zero conditions reduce to exactly these.
    std::vector<std::size_t> arithmetic_indices;
    // Enumerated chi with self-pairing 0 and defect 0 alongside xi = e_1.
    std::vector<std::vector<i64>> admissible;
    std::size_t enumerated = 0;
};

// Certifies that a square-zero sphere class with divisor profile e_1 meets the
// chain exactly once, through C_1.  Works over the integer forms: for xi = e_1
// and sparse chi, self = ((pq-1) - Q)/p^2 and defect has numerator
// p^2 - 1 + S1 - S0 p^2 - Q over 2p^2, with S0 = sum(chi), S1 = sum
// chi_j (e_j + f_j) and Q = -p^2 chi^T M_C^{-1} chi.
inline UniqueIntersectionReport verify_unique_intersection(i64 p, i64 q) {
    require_wahl_pair(p, q);
    const AccompanyingNumbers acc =
        accompanying(checked_i64(i128(p) * p), checked_i64(i128(p) * q - 1));
    const std::size_t m = acc.m();
    const i128 p2 = i128(p) * p;
    const i128 num = i128(p) * q - 1;

    UniqueIntersectionReport rep;
    rep.p = p;
    rep.q = q;
    for (std::size_t j = 1; j <= m; ++j) {
        const i128 e = acc.e[j], f = acc.f[j];
        if ((e - 1) * (f - 1) == 0 && e * f == num) rep.arithmetic_indices.push_back(j);
    }
    detail::for_each_small_chi(m, [&](const std::vector<std::pair<std::size_t, i64>>& s) {
        ++rep.enumerated;
        i128 S0 = 0, S1 = 0, Q = 0;
        for (auto [j, w] : s) {
            S0 += w;
            S1 += i128(w) * (acc.e[j] + acc.f[j]);
        }
        for (std::size_t x = 0; x < s.size(); ++x)
            for (std::size_t y = x; y < s.size(); ++y) {
                const i128 term = i128(acc.e[s[x].first]) * acc.f[s[y].first] *
                                  s[x].second * s[y].second;
                Q += (x == y) ? term : 2 * term;
            }
        if (Q == num && p2 - 1 + S1 - S0 * p2 - Q == 0) {
            std::vector<i64> dense(m, 0);
            for (auto [j, w] : s) dense[j - 1] = w;
            rep.admissible.push_back(std::move(dense));
        }
    });

    std::vector<i64> e1(m, 0);
    e1[0] = 1;
    rep.unique = rep.arithmetic_indices == std::vector<std::size_t>{1} &&
                 rep.admissible.size() == 1 && rep.admissible.front() == e1;
    return rep;
}

// Broken ruling fibre T = sum_{j>=2} alpha_j C_j + sum_{i>=1} beta_i D_i + eps E,
// with the exceptional sphere E meeting C_r and D_s once each.
struct RulingSolution {
    std::vector<i64> alpha; // multiplicities of C_2..C_m
    std::vector<i64> beta;  // multiplicities of D_1..D_n
    i64 epsilon = 0;        // multiplicity of E
    std::size_t r = 0;      // E meets C_r
    std::size_t s = 0;      // E meets D_s
};

namespace detail {

// Checks T against every basis sphere and E: T.C_1 = T.D_0 = 1, zero on all
// other chain spheres and on E itself (a fibre pairs trivially with each of
// its components).
inline bool ruling_residuals_ok(const std::vector<i64>& b_word, const std::vector<i64>& d_tail,
                                const RulingSolution& sol) {
    const std::size_t m = b_word.size(), n = d_tail.size();
    if (sol.alpha.size() + 1 != m || sol.beta.size() != n) return false;
    auto alpha_at = [&](std::size_t j) -> i128 {
        return (j >= 2 && j <= m) ? i128(sol.alpha[j - 2]) : 0;
    };
    auto beta_at = [&](std::size_t i) -> i128 {
        return (i >= 1 && i <= n) ? i128(sol.beta[i - 1]) : 0;
    };
    const i128 eps = sol.epsilon;
    if (alpha_at(2) + (sol.r == 1 ? eps : 0) != 1) return false; // T.C_1
    if (beta_at(1) != 1) return false;                           // T.D_0
    for (std::size_t j = 2; j <= m; ++j) {
        const i128 v = -i128(b_word[j - 1]) * alpha_at(j) + alpha_at(j - 1) + alpha_at(j + 1) +
                       (sol.r == j ? eps : 0);
        if (v != 0) return false;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        const i128 v = -i128(d_tail[i - 1]) * beta_at(i) + beta_at(i - 1) + beta_at(i + 1) +
                       (sol.s == i ? eps : 0);
        if (v != 0) return false;
    }
    return alpha_at(sol.r) + beta_at(sol.s) - eps == 0; // T.E
}

} // namespace detail

// Solves the fibre conditions for every attachment (r,s) and returns the one
// consistent assignment.  Multiplicities come from the closed-form tail
// inverses: alpha = -eps M_C'^{-1} e_r with eps = (pq-1)/f_{r-1} forced by
// alpha_2 = 1, and the divisor side only matches when the two tail fractions
// share the accompanying value f_{r-1} = h_s; positive integrality is required
// throughout.  The unique solution attaches at the terminal spheres r = m,
// s = n with eps = pq - 1.
inline RulingSolution broken_ruling_solve(const BlowupBasis& b) {
    if (b.ambient_p != b.chain_p || b.ambient_q != b.chain_q)
        throw std::domain_error("the ruling solver needs the chain and divisor of a single pair");
    const std::size_t m = b.m(), n = b.n();
    const i64 num = checked_i64(i128(b.ambient_p) * b.ambient_q - 1);
    const std::vector<i64>& bw = b.wahl.coeffs;
    const std::vector<i64> dt = b.comp.tail();
    std::vector<RulingSolution> found;

    if (m == 1) {
        // One-sphere chain, so E meets C_1 itself and T.C_1 = 1 forces eps = 1.
        // Only the (2,1) pair lands here, with a single divisor tail sphere.
        for (std::size_t s = 1; s <= n; ++s) {
            RulingSolution cand;
            cand.epsilon = 1;
            cand.r = 1;
            cand.s = s;
            if (n != 1 || dt[0] != 1) break;
            cand.beta = {1};
            if (detail::ruling_residuals_ok(bw, dt, cand)) found.push_back(std::move(cand));
        }
    } else {
        const i64 denC = checked_i64(i128(bw[0]) * num - i128(b.ambient_p) * b.ambient_p);
        const AccompanyingNumbers aC = accompanying(num, denC);
        const AccompanyingNumbers& aD = *b.acc_D;
        if (aC.m() + 1 != m || aD.m() != n)
            throw std::logic_error("tail accompanying lengths disagree with the chain lengths");
        for (std::size_t r = 2; r <= m; ++r) { // r = 1 would force alpha = 0
            const i64 fr = aC.f[r - 1];
            if (num % fr != 0) continue;
            const i64 eps = num / fr;
            for (std::size_t s = 1; s <= n; ++s) {
                if (aD.f[s] != fr) continue; // beta_1 = 1 needs the shared value
                RulingSolution cand;
                cand.epsilon = eps;
                cand.r = r;
                cand.s = s;
                cand.alpha.resize(m - 1);
                cand.beta.resize(n);
                bool ok = true;
                for (std::size_t j = 1; j <= m - 1 && ok; ++j) {
                    const i128 prod =
                        (j <= r - 1) ? i128(aC.e[j]) * fr : i128(aC.e[r - 1]) * aC.f[j];
                    ok = prod % fr == 0 && prod / fr > 0;
                    if (ok) cand.alpha[j - 1] = checked_i64(prod / fr);
                }
                for (std::size_t i = 1; i <= n && ok; ++i) {
                    const i128 prod =
                        (i <= s) ? i128(aD.e[i]) * fr : i128(aD.e[s]) * aD.f[i];
                    ok = prod % fr == 0 && prod / fr > 0;
                    if (ok) cand.beta[i - 1] = checked_i64(prod / fr);
                }
                if (ok && detail::ruling_residuals_ok(bw, dt, cand))
                    found.push_back(std::move(cand));
            }
        }
    }

    if (found.size() != 1)
        throw std::logic_error("broken ruling attachment is not unique; arithmetic inconsistency");
    RulingSolution sol = std::move(found.front());
    if (sol.r != m || sol.s != n)
        throw std::logic_error("broken ruling must attach at the terminal spheres");
    return sol;
}

// A second broken ruling covering the chain tail alone would need
// 1 = alpha_2 = f_r/(pq-1) for some attachment r; interior accompanying values
// stay strictly below pq-1, so every r fails.
inline bool two_ruling_exclusion(i64 p, i64 q) {
    require_wahl_pair(p, q);
    if (p == 2) return true; // empty chain tail: nothing to attach a second ruling to
    const WahlData w = wahl_chain(p, q);
    const i64 num = checked_i64(i128(p) * q - 1);
    const i64 denC = checked_i64(i128(w.wahl.coeffs[0]) * num - i128(p) * p);
    const AccompanyingNumbers aC = accompanying(num, denC);
    for (std::size_t j = 1; j <= aC.m(); ++j)
        if (aC.f[j] >= num) return false;
    return true;
}

// The two tail fractions (pq-1)/(b1(pq-1)-p^2) and (pq-1)/[q^2]^{-1} are dual,
// and dual fractions share exactly one right accompanying value, namely 1.
// This is what pins the ruling attachment to the terminal spheres.
inline bool shared_accompanying_check(i64 p, i64 q) {
    require_wahl_pair(p, q);
    if (q == 1) throw std::domain_error("the tail comparison needs q != 1");
    const WahlData w = wahl_chain(p, q);
    const i64 num = checked_i64(i128(p) * q - 1);
    const i64 denC = checked_i64(i128(w.wahl.coeffs[0]) * num - i128(p) * p);
    const i64 q2inv = checked_i64(i128(p) * p - i128(compute_d0(p, q)) * num);
    const AccompanyingNumbers aC = accompanying(num, denC);
    const AccompanyingNumbers aD = accompanying(num, q2inv);
    std::set<i64> fc(aC.f.begin() + 1, aC.f.end() - 1);
    std::set<i64> fd(aD.f.begin() + 1, aD.f.end() - 1);
    std::set<i64> shared;
    for (i64 v : fc)
        if (fd.count(v)) shared.insert(v);
    return shared == std::set<i64>{1};
}

// Blow-down record for the broken fibre [-b2..-bm, -1, -dn..-d1] between the
// sections C_1 (-b1) and D_0 (+d0).
struct ContractionTrace {
    std::vector<std::vector<i64>> states; // interior chain, initial state first, ends at {0}
    std::vector<std::size_t> contracted;  // 1-based slot removed at each step
    i64 c1_initial = 0;                   // -b1
    i64 c1_final = 0;                     // -d0 after the final contraction
    i64 d0 = 0;                           // +d0, untouched throughout
    std::size_t steps = 0;                // == m + n - 1
    std::size_t betti = 0;                // m + n + 1 classes before contracting
};

// Contracts the broken fibre down to an irreducible 0-fibre.  Each step removes
// the unique interior (-1)-sphere and raises both neighbours, sections
// included; when only two (-1)-spheres remain the one meeting the nascent
// negative section C_1 goes, which lands the sections on -d0 and +d0.
inline ContractionTrace contraction_simulator(i64 p, i64 q) {
    require_wahl_pair(p, q);
    const WahlData w = wahl_chain(p, q);
    const CompactificationData comp = compactifying_divisor(p, q);
    const std::size_t m = w.wahl.size(), n = comp.n();

    ContractionTrace tr;
    tr.c1_initial = -w.wahl.coeffs[0];
    tr.d0 = comp.d0;
    tr.betti = m + n + 1;

    std::vector<i64> st;
    for (std::size_t j = 1; j < m; ++j) st.push_back(-w.wahl.coeffs[j]);
    st.push_back(-1);
    const std::vector<i64> tail = comp.tail();
    for (std::size_t i = n; i >= 1; --i) st.push_back(-tail[i - 1]);
    tr.states.push_back(st);

    i64 c1 = tr.c1_initial;
    i64 d0_flank = comp.d0;
    while (st.size() > 1) {
        std::vector<std::size_t> ones;
        for (std::size_t idx = 0; idx < st.size(); ++idx)
            if (st[idx] == -1) ones.push_back(idx);
        std::size_t pick;
        if (st.size() == 2 && ones.size() == 2) {
            pick = 0; // final stage: contract at the C_1 side
        } else if (ones.size() == 1) {
            pick = ones.front();
        } else if (ones.empty()) {
            throw std::logic_error("stuck chain: no (-1)-sphere before the fibre closes up");
        } else {
            throw std::logic_error("ambiguous chain: several (-1)-spheres outside the final stage");
        }
        if (pick == 0) c1 += 1; else st[pick - 1] += 1;
        if (pick + 1 == st.size()) d0_flank += 1; else st[pick + 1] += 1;
        st.erase(st.begin() + static_cast<std::ptrdiff_t>(pick));
        tr.contracted.push_back(pick + 1);
        tr.states.push_back(st);
    }

    tr.steps = tr.states.size() - 1;
    tr.c1_final = c1;
    if (st.front() != 0)
        throw std::logic_error("the surviving fibre must close up at self-intersection zero");
    if (tr.steps != m + n - 1)
        throw std::logic_error("contraction count must be m + n - 1");
    if (c1 != -comp.d0 || d0_flank != comp.d0)
        throw std::logic_error("sections must land on -d0 and +d0");
    return tr;
}

} // namespace pinwheel
