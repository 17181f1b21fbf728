#pragma once

// Embedding obstructions for pin-balls.  Two independent computations live
// here: the sharp non-squeezing bound for squeezing a pin-ball into either of
// the two pin-cylinders over the same ball, and the arithmetic classification
// of which (m,n)-pinwheels fit inside B_{p,q} at all.  The quantitative bound
// rests on the last Wahl sphere C_m: its boundary direction, its symplectic
// area under a size-t*alpha blow-up, and its coefficient inside the broken
// ruling fibre cancel to the inequality alpha <= lambda.

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "chain_algebra.hpp"
#include "hj.hpp"
#include "mat2.hpp"
#include "rational.hpp"

namespace pinwheel {

// The two cylinder shapes over B_{p,q}: capped in the first factor with the
// second left infinite, or the other way round.  Both impose the same bound.
enum class CylinderKind { first_axis, second_axis };

struct NonsqueezeQuery {
    i64 p = 0;
    i64 q = 0;
    Rational alpha;  // pin-ball size, > 0
    Rational lambda; // finite cylinder size, > 0
    CylinderKind cylinder_kind = CylinderKind::first_axis;
};

// Boundary direction of C_m in the minimal resolution.  Primitive for every
// Wahl pair; the guard documents that no common factor can appear.
inline IntVec2 cm_direction(i64 p, i64 q) {
    require_wahl_pair(p, q);
    IntVec2 v{checked_i64(i128(p) * p - (i128(p) * q + 1)),
              checked_i64(i128(p) * q - (i128(q) * q + 1))};
    if (!is_primitive(v)) throw std::logic_error("C_m direction is not primitive");
    return v;
}

// Symplectic area of C_m when the ball is blown up at size t*alpha:
// t*alpha * p^2 / (p^2 - (pq+1)).  The denominator is [pq-1]^{-1} mod p^2,
// hence positive.
inline Rational cm_area(i64 p, i64 q, const Rational& t_alpha) {
    require_wahl_pair(p, q);
    if (t_alpha < Rational(0)) throw std::domain_error("area scale must be nonnegative");
    const i128 denom = i128(p) * p - (i128(p) * q + 1);
    assert(denom > 0);
    return t_alpha * Rational::make(i128(p) * p, denom);
}

// Coefficient of C_m in the broken ruling fibre:
// c_m = (M_C^{-1} e_m)_m = -e_m f_m / p^2 = -(p^2 - (pq+1)) / p^2.
inline Rational cm_coefficient(i64 p, i64 q) {
    require_wahl_pair(p, q);
    return Rational::make(-(i128(p) * p - (i128(p) * q + 1)), i128(p) * p);
}

struct NonsqueezeVerdict {
    bool allowed = false; // alpha <= lambda; the boundary case embeds
    Rational bound;       // sharp threshold for alpha, equal to lambda
    Rational coefficient; // c_m, the obstruction weight
    Rational area_scale;  // area of C_m per unit of t*alpha
    // For p >= 3 the two cylinder shapes are not symplectomorphic, although
    // they impose the same bound; reported for downstream consumers.
    bool cylinders_distinct = false;
};

// Decides B_{p,q}(alpha) -> E(lambda, infinity) or E(infinity, lambda).
// Obstructed iff alpha > lambda: positivity of the broken fibre area,
// 0 < lambda + c_m * area(t*alpha), collapses to t*alpha <= lambda for all
// t <= 1.  Equality is allowed since the wedge of size alpha = lambda sits
// inside the infinite cylinder wedge.
inline NonsqueezeVerdict nonsqueeze_verdict(const NonsqueezeQuery& qr) {
    require_wahl_pair(qr.p, qr.q);
    if (!(qr.alpha > Rational(0)) || !(qr.lambda > Rational(0)))
        throw std::domain_error("sizes must be positive");
    NonsqueezeVerdict v;
    v.allowed = qr.alpha <= qr.lambda;
    v.bound = qr.lambda;
    v.coefficient = cm_coefficient(qr.p, qr.q);
    v.area_scale = cm_area(qr.p, qr.q, Rational(1));
    v.cylinders_distinct = qr.p >= 3;
    return v;
}

struct ClassificationResult {
    i64 p = 0;
    i64 q = 0;
    std::vector<std::pair<i64, i64>> admissible; // (m,n), sorted by n
};

// Which (m,n)-pinwheels embed in B_{p,q}.  Chern class primitivity forces
// m | p; writing l = p/m, the adjunction count of a square-zero sphere
// through the chain demands 0 = 1/l^2 - 1 + (e_j - 1)(f_j - 1) at the contact
// slot j, which kills every l >= 2 and pins j to an end of the chain.  The
// sphere's self-intersection then forces e_j f_j = pq - 1, while the ends of
// the (m,n)-chain carry e_j f_j in {mn-1, m(m-n)-1}; survivors are exactly
// n = q and n = p - q.
inline ClassificationResult classify_pinwheels(i64 p, i64 q) {
    require_wahl_pair(p, q);
    ClassificationResult out{p, q, {}};
    const i64 target = checked_i64(i128(p) * q - 1);
    for (i64 m = 2; m <= p; ++m) {
        if (p % m != 0) continue;
        const i64 l = p / m;
        for (i64 n = 1; n < m; ++n) {
            if (gcd_i64(m, n) != 1) continue;
            const AccompanyingNumbers acc =
                accompanying(checked_i64(i128(m) * m), checked_i64(i128(m) * n - 1));
            bool survives = false;
            for (std::size_t j : {std::size_t{1}, acc.m()}) {
                const i64 ej = acc.e[j];
                const i64 fj = acc.f[j];
                const Rational residual = Rational::make(1, i128(l) * l) - Rational(1) +
                                          Rational::make(i128(ej - 1) * (fj - 1), 1);
                if (!residual.is_zero()) continue;
                const i128 ef = i128(ej) * fj;
                // Sanity: an end slot of the (m,n)-chain, nothing else.
                if (ef != i128(m) * n - 1 && ef != i128(m) * (m - n) - 1)
                    throw std::logic_error("contact slot is not an end of the chain");
                if (ef == target) {
                    survives = true;
                    break;
                }
            }
            if (survives) out.admissible.emplace_back(m, n);
        }
    }
    return out;
}

} // namespace pinwheel
