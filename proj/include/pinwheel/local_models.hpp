#pragma once

// Numeric spot checks of the explicit local formulas: the collar
// parametrization of a (p,q)-pinwheel, the straightening symplectomorphism,
// and the cyclic action on the affine hypersurface z1 z2 = z3^p + 1.  This is
// the only module that touches floating point; every tolerance is a named
// constant below.  A tiny term-level simplifier re-derives the collar
// residual and the root-of-unity cancellation exactly; it handles just those
// two identities and is not a general symbolic engine.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "hj.hpp"
#include "rational.hpp"

namespace pinwheel {

// Collar residual must stay below this at finite-difference step 1e-4.
inline constexpr double kLagrangianResidualTol = 1e-8;
// Max entrywise deviation of J^T O J from O for the straightening map.
inline constexpr double kSymplecticJacobianTol = 1e-6;
// Invariance defect of the cyclic action on sampled hypersurface points.
inline constexpr double kQuotientDefectTol = 1e-9;

// One collar sample: domain parameters and the image (tau, x, u + iv) in
// T*S^1 x C coordinates.  tau = p t is kept unreduced; circle-valuedness is
// the caller's concern.
struct CollarPoint {
    double t = 0;
    double s = 0;
    double tau = 0;
    double x = 0;
    double u = 0;
    double v = 0;
};

// The good collar: (t, s) -> (p t, q s^2 / 2p, s e^{iqt}).
inline CollarPoint collar_eval(i64 p, i64 q, double t, double s) {
    require_wahl_pair(p, q);
    if (s < 0) throw std::domain_error("radial parameter must be nonnegative");
    CollarPoint pt;
    pt.t = t;
    pt.s = s;
    pt.tau = double(p) * t;
    pt.x = double(q) * s * s / (2.0 * double(p));
    pt.u = s * std::cos(double(q) * t);
    pt.v = s * std::sin(double(q) * t);
    return pt;
}

namespace detail {

inline std::complex<double> collar_z(i64 q, double t, double s) {
    return {s * std::cos(double(q) * t), s * std::sin(double(q) * t)};
}

inline double collar_x(i64 p, i64 q, double s) {
    return double(q) * s * s / (2.0 * double(p));
}

} // namespace detail

// Max over an n x n grid of |omega(d_t Sigma, d_s Sigma)| evaluated by
// central differences with step h.  The grid covers t in [0, 2pi) and
// s in [0, 1/2]; the formulas extend smoothly through s = 0, so the
// difference stencil may dip below the collar.  Analytically the residual is
// zero; the finite-difference value scales as q^3 h^2 / 6 times s.
inline double lagrangian_check(i64 p, i64 q, int resolution, double h = 1e-4) {
    require_wahl_pair(p, q);
    if (resolution < 4) throw std::domain_error("grid resolution must be at least 4");
    if (!(h > 0)) throw std::domain_error("difference step must be positive");
    const double two_pi = 2.0 * std::acos(-1.0);
    double worst = 0;
    for (int i = 0; i < resolution; ++i) {
        const double t = two_pi * i / resolution;
        for (int j = 0; j < resolution; ++j) {
            const double s = 0.5 * j / (resolution - 1);
            const double dsx =
                (detail::collar_x(p, q, s + h) - detail::collar_x(p, q, s - h)) / (2 * h);
            const std::complex<double> dtz =
                (detail::collar_z(q, t + h, s) - detail::collar_z(q, t - h, s)) / (2 * h);
            const std::complex<double> dsz =
                (detail::collar_z(q, t, s + h) - detail::collar_z(q, t, s - h)) / (2 * h);
            const double residual = double(p) * dsx + std::imag(std::conj(dtz) * dsz);
            worst = std::max(worst, std::abs(residual));
        }
    }
    return worst;
}

struct PhasePoint {
    double tau = 0;
    double x = 0;
    double u = 0;
    double v = 0;
};

// The straightening map (tau, x, z) -> (tau, x - eta'(tau)|z|^2 / 2,
// e^{-i eta(tau)} z); eta' is taken by central differences.
inline PhasePoint apply_straightening(const std::function<double(double)>& eta,
                                      const PhasePoint& pt, double fd_step = 1e-5) {
    const double ep = (eta(pt.tau + fd_step) - eta(pt.tau - fd_step)) / (2 * fd_step);
    const std::complex<double> z{pt.u, pt.v};
    const std::complex<double> w = std::polar(1.0, -eta(pt.tau)) * z;
    return {pt.tau, pt.x - 0.5 * ep * std::norm(z), w.real(), w.imag()};
}

// Max entrywise |J^T O J - O| over the sample points, with J the numeric
// Jacobian of the straightening map and O the standard form on
// (tau, x, u, v).  Symplectic maps score zero up to difference error.
inline double straightening_check(const std::function<double(double)>& eta,
                                  const std::vector<PhasePoint>& points,
                                  double jac_step = 1e-5) {
    if (!(jac_step > 0)) throw std::domain_error("difference step must be positive");
    static constexpr double Omega[4][4] = {
        {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
    double worst = 0;
    for (const PhasePoint& pt : points) {
        double base[4] = {pt.tau, pt.x, pt.u, pt.v};
        double J[4][4];
        for (int col = 0; col < 4; ++col) {
            double fwd[4] = {base[0], base[1], base[2], base[3]};
            double bwd[4] = {base[0], base[1], base[2], base[3]};
            fwd[col] += jac_step;
            bwd[col] -= jac_step;
            const PhasePoint hi = apply_straightening(eta, {fwd[0], fwd[1], fwd[2], fwd[3]});
            const PhasePoint lo = apply_straightening(eta, {bwd[0], bwd[1], bwd[2], bwd[3]});
            const double hi4[4] = {hi.tau, hi.x, hi.u, hi.v};
            const double lo4[4] = {lo.tau, lo.x, lo.u, lo.v};
            for (int row = 0; row < 4; ++row) J[row][col] = (hi4[row] - lo4[row]) / (2 * jac_step);
        }
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0;
                for (int k = 0; k < 4; ++k)
                    for (int l = 0; l < 4; ++l) s += J[k][i] * Omega[k][l] * J[l][j];
                worst = std::max(worst, std::abs(s - Omega[i][j]));
            }
    }
    return worst;
}

// Deterministic sample cloud for the straightening check: tau covers a full
// period, the fibre coordinates stay of order one.
inline std::vector<PhasePoint> random_phase_points(int count, unsigned seed) {
    if (count <= 0) throw std::domain_error("need a positive sample count");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::acos(-1.0));
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back({angle(rng), coord(rng), coord(rng), coord(rng)});
    return out;
}

// Invariance and freeness data for the weight (1, -1, q) action of the p-th
// roots of unity on z1 z2 = z3^p + 1.
struct QuotientCheck {
    double max_defect = 0;     // |(zeta z1)(zeta^-1 z2) - (zeta^q z3)^p - 1|
    double min_motion = std::numeric_limits<double>::infinity(); // over zeta != 1
    int samples = 0;

    bool ok(double tol = kQuotientDefectTol) const {
        return max_defect <= tol && min_motion > 1e-6;
    }
};

namespace detail {

inline std::complex<double> ipow(std::complex<double> z, i64 n) {
    std::complex<double> acc{1, 0};
    for (i64 i = 0; i < n; ++i) acc *= z;
    return acc;
}

} // namespace detail

// Samples points of the hypersurface (z2 is solved for exactly, so the
// defining defect is pure rounding) and applies every p-th root of unity.
inline QuotientCheck quotient_action_check(i64 p, i64 q, int samples, unsigned seed = 2027) {
    require_wahl_pair(p, q);
    if (samples <= 0) throw std::domain_error("need a positive sample count");
    const double two_pi = 2.0 * std::acos(-1.0);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, two_pi);
    std::uniform_real_distribution<double> rad3(0.0, 1.2);
    std::uniform_real_distribution<double> rad1(0.6, 1.4);

    QuotientCheck result;
    result.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const std::complex<double> z3 = std::polar(rad3(rng), angle(rng));
        const std::complex<double> z1 = std::polar(rad1(rng), angle(rng));
        const std::complex<double> z2 = (detail::ipow(z3, p) + 1.0) / z1;
        for (i64 k = 0; k < p; ++k) {
            const std::complex<double> zeta = std::polar(1.0, two_pi * double(k) / double(p));
            const std::complex<double> w1 = zeta * z1;
            const std::complex<double> w2 = std::conj(zeta) * z2;
            const std::complex<double> w3 = std::polar(1.0, two_pi * double(k * q) / double(p)) * z3;
            const double defect = std::abs(w1 * w2 - detail::ipow(w3, p) - 1.0);
            result.max_defect = std::max(result.max_defect, defect);
            if (k != 0) {
                const double moved = std::max({std::abs(w1 - z1), std::abs(w2 - z2),
                                               std::abs(w3 - z3)});
                result.min_motion = std::min(result.min_motion, moved);
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Exact term calculus over expressions  sum c * s^m * e^{i k t}  with
// Gaussian-rational coefficients.  Just enough structure to differentiate,
// conjugate, multiply, and take phase-free imaginary parts.

struct GaussRat {
    Rational re, im;

    friend bool operator==(const GaussRat&, const GaussRat&) = default;
    bool zero() const { return re.is_zero() && im.is_zero(); }
    GaussRat conj() const { return {re, -im}; }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
};

struct PhaseTerm {
    GaussRat c;
    int spow = 0;
    int phase = 0; // multiple of t in the exponential

    friend bool operator==(const PhaseTerm&, const PhaseTerm&) = default;
};

struct PhasePoly {
    std::vector<PhaseTerm> terms; // sorted by (spow, phase), zero coefficients removed

    static PhasePoly term(GaussRat c, int spow, int phase) {
        PhasePoly p;
        p.terms.push_back({c, spow, phase});
        p.normalize();
        return p;
    }

    bool zero() const { return terms.empty(); }

    void normalize() {
        std::sort(terms.begin(), terms.end(), [](const PhaseTerm& a, const PhaseTerm& b) {
            return a.spow != b.spow ? a.spow < b.spow : a.phase < b.phase;
        });
        std::vector<PhaseTerm> merged;
        for (const PhaseTerm& t : terms) {
            if (!merged.empty() && merged.back().spow == t.spow && merged.back().phase == t.phase)
                merged.back().c = merged.back().c + t.c;
            else
                merged.push_back(t);
        }
        terms.clear();
        for (const PhaseTerm& t : merged)
            if (!t.c.zero()) terms.push_back(t);
    }

    friend PhasePoly operator+(const PhasePoly& a, const PhasePoly& b) {
        PhasePoly r = a;
        r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
        r.normalize();
        return r;
    }
    friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
        PhasePoly r;
        for (const PhaseTerm& x : a.terms)
            for (const PhaseTerm& y : b.terms)
                r.terms.push_back({x.c * y.c, x.spow + y.spow, x.phase + y.phase});
        r.normalize();
        return r;
    }

    PhasePoly dt() const {
        PhasePoly r;
        for (const PhaseTerm& t : terms) {
            const Rational k(t.phase);
            r.terms.push_back({GaussRat{-t.c.im * k, t.c.re * k}, t.spow, t.phase});
        }
        r.normalize();
        return r;
    }
    PhasePoly ds() const {
        PhasePoly r;
        for (const PhaseTerm& t : terms) {
            if (t.spow == 0) continue;
            const Rational m(t.spow);
            r.terms.push_back({GaussRat{t.c.re * m, t.c.im * m}, t.spow - 1, t.phase});
        }
        r.normalize();
        return r;
    }
    PhasePoly conjugate() const {
        PhasePoly r;
        for (const PhaseTerm& t : terms) r.terms.push_back({t.c.conj(), t.spow, -t.phase});
        r.normalize();
        return r;
    }
    // Imaginary part, defined here only when every phase factor has cancelled.
    PhasePoly imag() const {
        PhasePoly r;
        for (const PhaseTerm& t : terms) {
            if (t.phase != 0)
                throw std::domain_error("imaginary part needs phase-free terms");
            r.terms.push_back({GaussRat{t.c.im, Rational(0)}, t.spow, 0});
        }
        r.normalize();
        return r;
    }
};

// Exact re-derivation of the collar identity: p d_s x + Im(conj(d_t z) d_s z)
// for x = (q/2p) s^2, z = s e^{iqt}.  Returns the (empty) normalized
// expression; callers assert .zero().
inline PhasePoly symbolic_lagrangian_residual(i64 p, i64 q) {
    require_wahl_pair(p, q);
    const PhasePoly x = PhasePoly::term({Rational(q, 2 * p), Rational(0)}, 2, 0);
    const PhasePoly z =
        PhasePoly::term({Rational(1), Rational(0)}, 1, static_cast<int>(q));
    const PhasePoly lhs =
        PhasePoly::term({Rational(p), Rational(0)}, 0, 0) * x.ds();
    const PhasePoly rhs = (z.dt().conjugate() * z.ds()).imag();
    return lhs + rhs;
}

// Root-of-unity cancellation in exponent arithmetic: the weights (1, -1, q)
// cancel on z1 z2, die on z3^p, and give a free action exactly when p, q are
// coprime.
inline bool symbolic_quotient_invariance(i64 p, i64 q) {
    if (p < 1 || q < 1) throw std::domain_error("weights need positive p and q");
    const i64 pair_weight = (1 + (p - 1)) % p; // exponent on z1 z2
    const i64 cube_weight = (q % p) * p % p;   // exponent on z3^p
    return pair_weight == 0 && cube_weight == 0 && gcd_i64(p, q) == 1;
}

} // namespace pinwheel
