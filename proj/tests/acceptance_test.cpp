// Acceptance gate: the full contract in one binary, one timed pass/fail line
// per criterion.  Exits nonzero if any line fails.  Golden SVG bytes are
// compared against PINWHEEL_GOLDEN_DIR.

#include <pinwheel/atf.hpp>
#include <pinwheel/chain_algebra.hpp>
#include <pinwheel/compactify.hpp>
#include <pinwheel/embeddings.hpp>
#include <pinwheel/hj.hpp>
#include <pinwheel/local_models.hpp>
#include <pinwheel/regulation.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pinwheel;

namespace {

std::vector<std::pair<i64, i64>> coprime_pairs(i64 max_p) {
    std::vector<std::pair<i64, i64>> out;
    for (i64 p = 2; p <= max_p; ++p)
        for (i64 q = 1; q < p; ++q)
            if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    return out;
}

struct Gate {
    int failures = 0;

    // body(why) returns pass/fail and may fill a one-line reason.
    // budget_s <= 0 skips the time ceiling.
    template <typename F>
    void criterion(int idx, const char* label, double budget_s, F&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string why;
        bool ok = false;
        try {
            ok = body(why);
        } catch (const std::exception& e) {
            ok = false;
            why = e.what();
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && budget_s > 0 && dt > budget_s) {
            ok = false;
            why = "over time budget";
        }
        std::printf("criterion %d %-28s %s  (%.2fs)%s%s\n", idx, label, ok ? "pass" : "FAIL", dt,
                    why.empty() ? "" : "  ", why.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

bool fail(std::string& why, std::string msg) {
    why = std::move(msg);
    return false;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return {};
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

int main() {
    Gate gate;

    // 1: worked expansions and the (n,1) family.
    gate.criterion(1, "worked examples", 1.0, [](std::string& why) {
        if (hj_expand(25, 9).coeffs != std::vector<i64>{3, 5, 2})
            return fail(why, "25/9 expansion is off");
        if (hj_expand(9, 4).coeffs != std::vector<i64>{3, 2, 2, 2})
            return fail(why, "9/4 expansion is off");
        if (compute_d0(5, 2) != 2) return fail(why, "d0(5,2) != 2");
        for (i64 n = 2; n <= 50; ++n) {
            std::vector<i64> want{n + 2};
            want.insert(want.end(), static_cast<std::size_t>(n - 2), 2);
            if (wahl_chain(n, 1).wahl.coeffs != want)
                return fail(why, "Wahl chain of (" + std::to_string(n) + ",1) is off");
            if (compute_d0(n, 1) != n + 1)
                return fail(why, "d0(" + std::to_string(n) + ",1) != n+1");
        }
        return true;
    });

    // 2: coefficient-matrix product identity for p/q.
    gate.criterion(2, "matrix identity p <= 50", 5.0, [](std::string& why) {
        for (auto [p, q] : coprime_pairs(50)) {
            const IntMat2 m = cf_matrix_product(hj_expand(p, q));
            const i64 inv = mod_inverse(q, p);
            const i128 dnum = 1 - i128(q) * inv;
            if (m.a != p || m.b != -inv || m.c != q || dnum % p != 0 ||
                m.d != static_cast<i64>(dnum / p))
                return fail(why, "identity fails at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
        }
        return true;
    });

    // 3: closed-form inverse vs fraction-free elimination, every chain n <= 200.
    gate.criterion(3, "closed-form inverse n <= 200", 60.0, [](std::string& why) {
        for (i64 n = 2; n <= 200; ++n)
            for (i64 a = 1; a < n; ++a) {
                if (std::gcd(n, a) != 1) continue;
                const auto cf = hj_expand(n, a);
                const auto acc = accompanying(cf, n, a);
                const auto closed = inverse_closed_form(acc);
                const auto gauss = exact_inverse(intersection_matrix(chain_from_word(cf)));
                if (!(closed == gauss))
                    return fail(why, "mismatch at " + std::to_string(n) + "/" +
                                         std::to_string(a));
            }
        return true;
    });

    // 4: Wahl discrepancies sit in (-1, 0].
    gate.criterion(4, "discrepancy range p <= 100", 10.0, [](std::string& why) {
        for (auto [p, q] : coprime_pairs(100)) {
            const auto acc = accompanying(checked_i64(i128(p) * p), checked_i64(i128(p) * q - 1));
            for (const Rational& k : discrepancies(acc))
                if (!(k > Rational(-1) && k <= Rational(0)))
                    return fail(why, "k = " + k.to_string() + " at (" + std::to_string(p) + "," +
                                         std::to_string(q) + ")");
        }
        return true;
    });

    // 5: divisor profiles, Schur corner entry, sign audit.
    gate.criterion(5, "divisor profiles and audit", 0.0, [](std::string& why) {
        if (compactifying_divisor(5, 2).divisor.selfints != std::vector<i64>{2, -2, -2, -2, -3})
            return fail(why, "(5,2) profile is off");
        if (compactifying_divisor(2, 1).divisor.selfints != std::vector<i64>{3, -1})
            return fail(why, "(2,1) profile is off");
        for (auto [p, q] : coprime_pairs(100)) {
            const auto c = compactifying_divisor(p, q);
            if (divisor_inverse(c).at(0, 0) != Rational::make(i128(p) * q - 1, i128(p) * p))
                return fail(why, "Schur corner off at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
            const auto audit = schur_inverse_audit(c);
            if (!audit.corrected_matches || audit.printed_matches)
                return fail(why, "audit does not single out the corrected column at (" +
                                     std::to_string(p) + "," + std::to_string(q) + ")");
        }
        return true;
    });

    // 6: regulation suite with the frozen (4,1) trace.
    gate.criterion(6, "regulation suite p <= 50", 120.0, [](std::string& why) {
        for (auto [p, q] : coprime_pairs(50)) {
            const BlowupBasis b = make_basis(p, q);
            std::vector<Rational> xi(b.n() + 1, Rational(0));
            xi[0] = Rational(1);
            std::vector<Rational> chi(b.m(), Rational(0));
            chi[0] = Rational(1);
            if (!adjunction_defect(b, class_from_profile(b, xi, chi)).is_zero())
                return fail(why, "defect at (e1,e1) nonzero for (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
            if (!verify_unique_intersection(p, q).unique)
                return fail(why, "intersection profile not unique at (" + std::to_string(p) +
                                     "," + std::to_string(q) + ")");
            const std::size_t m = b.m(), n = b.n();
            const RulingSolution rs = broken_ruling_solve(b);
            bool positive = rs.epsilon >= 1;
            for (i64 v : rs.alpha) positive = positive && v >= 1;
            for (i64 v : rs.beta) positive = positive && v >= 1;
            if (rs.r != m || rs.s != n || !positive)
                return fail(why, "ruling solution off at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
            if (q != 1 && !shared_accompanying_check(p, q))
                return fail(why, "shared accompanying value missing at (" + std::to_string(p) +
                                     "," + std::to_string(q) + ")");
            const ContractionTrace tr = contraction_simulator(p, q);
            if (tr.steps != m + n - 1 || tr.c1_final != -tr.d0 ||
                tr.states.back() != std::vector<i64>{0})
                return fail(why, "contraction off at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
        }
        const ContractionTrace t41 = contraction_simulator(4, 1);
        const std::vector<std::vector<i64>> fig = {{-2, -2, -1, -3}, {-2, -1, -2}, {-1, -1}, {0}};
        if (t41.states != fig || t41.contracted != std::vector<std::size_t>{3, 2, 1} ||
            t41.c1_initial != -6 || t41.c1_final != -5 || t41.d0 != 5)
            return fail(why, "(4,1) trace does not match the figure");
        return true;
    });

    // 7: embedding bounds, random boundary cases, exact cancellation.
    gate.criterion(7, "embedding suite", 30.0, [](std::string& why) {
        std::mt19937 rng(20260816);
        const auto pairs20 = coprime_pairs(20);
        std::uniform_int_distribution<std::size_t> pick(0, pairs20.size() - 1);
        std::uniform_int_distribution<i64> num(1, 400), den(1, 40);
        for (int i = 0; i < 100; ++i) {
            const auto [p, q] = pairs20[pick(rng)];
            NonsqueezeQuery nq;
            nq.p = p;
            nq.q = q;
            nq.alpha = Rational(num(rng), den(rng));
            nq.lambda = Rational(num(rng), den(rng));
            const auto v = nonsqueeze_verdict(nq);
            if (v.allowed != (nq.alpha <= nq.lambda) || v.bound != nq.lambda)
                return fail(why, "verdict off for alpha " + nq.alpha.to_string() + ", lambda " +
                                     nq.lambda.to_string());
            nq.alpha = nq.lambda; // boundary case embeds
            if (!nonsqueeze_verdict(nq).allowed)
                return fail(why, "boundary alpha = lambda rejected");
        }
        for (auto [p, q] : coprime_pairs(50)) {
            const Rational c = cm_coefficient(p, q);
            const Rational t(num(rng), den(rng));
            if (cm_area(p, q, t) * c.abs() != t)
                return fail(why, "cancellation fails at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
            const auto cls = classify_pinwheels(p, q);
            const i64 lo = std::min(q, p - q), hi = std::max(q, p - q);
            std::vector<std::pair<i64, i64>> want{{p, lo}};
            if (hi != lo) want.emplace_back(p, hi);
            if (cls.admissible != want)
                return fail(why, "classification off at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
        }
        return true;
    });

    // 8: integral-affine invariance, shear, embedding matrix, golden bytes.
    gate.criterion(8, "atf suite", 30.0, [](std::string& why) {
        std::mt19937 rng(902216);
        std::uniform_int_distribution<i64> entry(-10, 10);
        std::uniform_int_distribution<i64> coord(-8, 8);
        auto random_unimodular = [&] {
            for (;;) {
                IntMat2 m{entry(rng), entry(rng), entry(rng), entry(rng)};
                if (m.det() == 1) return m;
            }
        };
        auto random_corner = [&] {
            for (;;) {
                IntVec2 u{coord(rng), coord(rng)};
                IntVec2 v{coord(rng), coord(rng)};
                if (u == IntVec2{0, 0} || v == IntVec2{0, 0}) continue;
                if (!is_primitive(u) || !is_primitive(v)) continue;
                if (det2(u, v) == 0) continue;
                return std::pair{u, v};
            }
        };
        for (int i = 0; i < 1000; ++i) {
            const auto [u, v] = random_corner();
            const IntMat2 g = random_unimodular();
            if (corner_type(g.apply(u), g.apply(v)) != corner_type(u, v))
                return fail(why, "corner type moved under a unimodular map");
        }
        for (auto [p, q] : coprime_pairs(100)) {
            const IntVec2 slant{checked_i64(i128(p) * p), checked_i64(i128(p) * q - 1)};
            const IntMat2 S = monodromy_shear(p, q);
            if (S.det() != 1 || S.trace() != 2 || S.apply({p, q}) != IntVec2{p, q} ||
                S.apply(slant) != IntVec2{0, -1})
                return fail(why, "shear off at (" + std::to_string(p) + "," + std::to_string(q) +
                                     ")");
            const auto wh = whitney_embedding_matrix(p, q);
            if (wh.M.det() != 1 || wh.M.apply({p, q}) != IntVec2{1, 1})
                return fail(why, "embedding matrix off at (" + std::to_string(p) + "," +
                                     std::to_string(q) + ")");
        }
        const std::string dir = PINWHEEL_GOLDEN_DIR;
        const std::string pin =
            emit_svg(build_pin_diagram(5, 2, Rational(1), Rational(1)));
        if (pin != slurp(dir + "/pin_ellipsoid_5_2.svg"))
            return fail(why, "pin ellipsoid SVG bytes drifted");
        const std::string comp = emit_svg(compactification_diagram(5, 2));
        if (comp != slurp(dir + "/compactification_5_2.svg"))
            return fail(why, "compactification SVG bytes drifted");
        return true;
    });

    // 9: floating-point local models.
    gate.criterion(9, "local-model numerics", 10.0, [](std::string& why) {
        if (lagrangian_check(2, 1, 64) > 1e-8 || lagrangian_check(5, 2, 64) > 1e-8)
            return fail(why, "residual above 1e-8 on the 64x64 grid");
        const double ratio =
            lagrangian_check(5, 2, 24, 1e-3) / lagrangian_check(5, 2, 24, 5e-4);
        if (!(ratio > 3.8 && ratio < 4.2))
            return fail(why, "halving ratio " + std::to_string(ratio) + " is not ~4");
        const auto pts = random_phase_points(100, 424242);
        const double dsin = straightening_check([](double t) { return std::sin(t); }, pts);
        const double dlin = straightening_check([](double t) { return 2 * t; }, pts);
        if (dsin > 1e-6 || dlin > 1e-6)
            return fail(why, "straightening Jacobian deviates past 1e-6");
        for (auto [p, q] : {std::pair<i64, i64>{3, 1}, {5, 2}, {7, 3}})
            if (!quotient_action_check(p, q, 1000).ok(1e-9))
                return fail(why, "quotient action defect above 1e-9 at (" + std::to_string(p) +
                                     "," + std::to_string(q) + ")");
        return true;
    });

    if (gate.failures == 0) {
        std::printf("acceptance: all criteria pass\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", gate.failures);
    return 1;
}
