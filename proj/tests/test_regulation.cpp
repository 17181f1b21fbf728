#include <catch2/catch_amalgamated.hpp>

#include <pinwheel/regulation.hpp>

#include <numeric>

using namespace pinwheel;

namespace {

std::vector<std::pair<i64, i64>> coprime_pairs(i64 max_p) {
    std::vector<std::pair<i64, i64>> out;
    for (i64 p = 2; p <= max_p; ++p)
        for (i64 q = 1; q < p; ++q)
            if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    return out;
}

std::vector<Rational> unit(std::size_t len, std::size_t idx0) {
    std::vector<Rational> v(len, Rational(0));
    v[idx0] = Rational(1);
    return v;
}

std::vector<Rational> zeros(std::size_t len) { return std::vector<Rational>(len, Rational(0)); }

// Independent tally of K.A for fibre-free classes.
Rational canonical_by_formula(const BlowupBasis& b, const std::vector<Rational>& xi,
                              const std::vector<Rational>& chi) {
    HomologyClass cls = class_from_profile(b, xi, chi);
    Rational total = -cls.a.front() - cls.a.back();
    for (const Rational& x : xi) total -= x;
    for (std::size_t j = 0; j < chi.size(); ++j) total += b.k[j] * chi[j];
    return total;
}

} // namespace

TEST_CASE("basis assembly") {
    BlowupBasis b52 = make_basis(5, 2);
    CHECK(b52.m() == 3);
    CHECK(b52.n() == 4);
    CHECK(b52.wahl.coeffs == std::vector<i64>{3, 5, 2});
    CHECK(b52.M_D.at(0, 0) == Rational(2));
    CHECK(b52.M_C.at(0, 0) == Rational(-3));
    CHECK(b52.M_C.at(1, 1) == Rational(-5));
    CHECK(b52.M_C.at(2, 2) == Rational(-2));
    CHECK(b52.k == std::vector<Rational>{{-3, 5}, {-4, 5}, {-2, 5}});
    CHECK(b52.acc_D.has_value());

    BlowupBasis b21 = make_basis(2, 1);
    CHECK(b21.m() == 1);
    CHECK(b21.n() == 1);
    CHECK(b21.k == std::vector<Rational>{{-1, 2}});
    CHECK_FALSE(b21.acc_D.has_value());

    // Inverses are genuine inverses of the stored forms.
    for (auto [p, q] : {std::pair<i64, i64>{5, 2}, {7, 3}, {9, 4}}) {
        BlowupBasis b = make_basis(p, q);
        CHECK(b.M_D * b.M_D_inv == RationalMatrix::identity(b.n() + 1));
        CHECK(b.M_C * b.M_C_inv == RationalMatrix::identity(b.m()));
    }
}

TEST_CASE("profile recovery and adjunction vanishing") {
    for (auto [p, q] : coprime_pairs(100)) {
        BlowupBasis b = make_basis(p, q);
        const i64 p2 = p * p;

        HomologyClass ruling = class_from_profile(b, unit(b.n() + 1, 0), unit(b.m(), 0));
        CHECK(ruling.a.front() == Rational(p * q - 1, p2));
        CHECK(ruling.a.back() == Rational(1, p2));
        CHECK(pairing_self(b, ruling) == Rational(0));
        CHECK(adjunction_defect(b, ruling) == Rational(0));
    }
}

TEST_CASE("self pairing examples") {
    for (auto [p, q] : {std::pair<i64, i64>{2, 1}, {5, 2}, {7, 3}}) {
        BlowupBasis b = make_basis(p, q);
        HomologyClass d_only = class_from_profile(b, unit(b.n() + 1, 0), zeros(b.m()));
        CHECK(pairing_self(b, d_only) == Rational(p * q - 1, p * p));

        HomologyClass zero = class_from_profile(b, zeros(b.n() + 1), zeros(b.m()));
        CHECK(pairing_self(b, zero) == Rational(0));
    }
}

TEST_CASE("profile round trip") {
    for (auto [p, q] : coprime_pairs(25)) {
        BlowupBasis b = make_basis(p, q);
        std::vector<Rational> xi(b.n() + 1), chi(b.m());
        for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = Rational(i64(i) - 1, 3);
        for (std::size_t j = 0; j < chi.size(); ++j) chi[j] = Rational(2 * i64(j) + 1, 5);
        HomologyClass cls = class_from_profile(b, xi, chi);
        CHECK(profile_D(b, cls) == xi);
        CHECK(profile_C(b, cls) == chi);
    }
}

TEST_CASE("canonical pairing") {
    BlowupBasis b21 = make_basis(2, 1);
    HomologyClass ruling21 = class_from_profile(b21, unit(2, 0), zeros(1));
    CHECK(pairing_canonical(b21, ruling21) == Rational(-3, 2));

    BlowupBasis b52 = make_basis(5, 2);
    HomologyClass ruling52 = class_from_profile(b52, unit(5, 0), zeros(3));
    CHECK(pairing_canonical(b52, ruling52) == Rational(-7, 5));

    // The general pairing against K agrees with the explicit tally.
    for (auto [p, q] : coprime_pairs(30)) {
        BlowupBasis b = make_basis(p, q);
        std::vector<Rational> xi = unit(b.n() + 1, 0);
        for (std::size_t j = 0; j < b.m(); ++j) {
            std::vector<Rational> chi = zeros(b.m());
            chi[j] = Rational(1 + i64(j % 3));
            HomologyClass cls = class_from_profile(b, xi, chi);
            CHECK(pairing_canonical(b, cls) == canonical_by_formula(b, xi, chi));
        }
    }
}

TEST_CASE("canonical class squares to nine minus chain lengths") {
    for (auto [p, q] : coprime_pairs(50)) {
        BlowupBasis b = make_basis(p, q);
        HomologyClass K = canonical_class(b);
        CHECK(pairing_self(b, K) == Rational(9 - i64(b.m()) - i64(b.n())));

        HomologyClass F;
        F.a = zeros(b.n() + 1);
        F.c = zeros(b.m());
        F.fibre_mult = Rational(1);
        CHECK(pairing(b, K, F) == Rational(-2));
        CHECK(pairing_self(b, F) == Rational(0));
    }
}

TEST_CASE("adjunction defect values") {
    BlowupBasis b21 = make_basis(2, 1);
    std::vector<Rational> chi21 = {Rational(2)};
    CHECK(adjunction_defect(b21, class_from_profile(b21, unit(2, 0), chi21)) == Rational(-5, 8));

    BlowupBasis b52 = make_basis(5, 2);
    std::vector<Rational> chi52 = {Rational(2), Rational(0), Rational(0)};
    CHECK(adjunction_defect(b52, class_from_profile(b52, unit(5, 0), chi52)) ==
          Rational(-21, 25));

    for (auto [p, q] : coprime_pairs(50)) {
        BlowupBasis b = make_basis(p, q);
        const std::vector<Rational> xi = unit(b.n() + 1, 0);

        std::vector<Rational> twice = zeros(b.m());
        twice[0] = Rational(2);
        CHECK(adjunction_defect(b, class_from_profile(b, xi, twice)) ==
              Rational::make(3 - i128(p) * p - 2 * i128(p) * q, 2 * i128(p) * p));

        // Hitting C_j once costs (e_j - 1)(f_j - 1)/(2p^2).
        for (std::size_t j = 0; j < b.m(); ++j) {
            HomologyClass cls = class_from_profile(b, xi, unit(b.m(), j));
            const i128 e = b.acc_C.e[j + 1], f = b.acc_C.f[j + 1];
            CHECK(adjunction_defect(b, cls) ==
                  Rational::make(-(e - 1) * (f - 1), 2 * i128(p) * p));
        }
    }
}

TEST_CASE("unique intersection reports") {
    UniqueIntersectionReport r52 = verify_unique_intersection(5, 2);
    CHECK(r52.unique);
    CHECK(r52.arithmetic_indices == std::vector<std::size_t>{1});
    CHECK(r52.admissible == std::vector<std::vector<i64>>{{1, 0, 0}});

    UniqueIntersectionReport r21 = verify_unique_intersection(2, 1);
    CHECK(r21.unique);
    CHECK(r21.admissible == std::vector<std::vector<i64>>{{1}});

    for (auto [p, q] : coprime_pairs(50)) {
        UniqueIntersectionReport rep = verify_unique_intersection(p, q);
        CHECK(rep.unique);
        const i64 m = i64(wahl_chain(p, q).wahl.size());
        CHECK(rep.enumerated ==
              std::size_t(3 * m + 3 * (m * (m - 1)) / 2 + m * (m - 1) * (m - 2) / 6));
    }
}

TEST_CASE("fibre profile is square zero and excludes chain hits") {
    for (auto [p, q] : coprime_pairs(50)) {
        BlowupBasis b = make_basis(p, q);
        std::vector<Rational> xi = zeros(b.n() + 1);
        xi.front() = Rational(1);
        xi.back() = Rational(1); // hits D_0 and D_n like a generic ruling fibre
        HomologyClass fib = class_from_profile(b, xi, zeros(b.m()));
        CHECK(pairing_self(b, fib) == Rational(0));
        CHECK(pairing_canonical(b, fib) == Rational(-2));
        CHECK(adjunction_defect(b, fib) == Rational(0));
    }

    // Any nonzero chain profile drags the defect strictly below zero.
    for (auto [p, q] : coprime_pairs(30)) {
        BlowupBasis b = make_basis(p, q);
        std::vector<Rational> xi = zeros(b.n() + 1);
        xi.front() = Rational(1);
        xi.back() = Rational(1);
        const std::size_t m = b.m();
        auto defect_with = [&](const std::vector<Rational>& chi) {
            return adjunction_defect(b, class_from_profile(b, xi, chi));
        };
        for (std::size_t j = 0; j < m; ++j)
            for (i64 w = 1; w <= 3; ++w) {
                std::vector<Rational> chi = zeros(m);
                chi[j] = Rational(w);
                CHECK(defect_with(chi) < Rational(0));
            }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                std::vector<Rational> chi = zeros(m);
                chi[i] = Rational(1);
                chi[j] = Rational(1);
                CHECK(defect_with(chi) < Rational(0));
            }
    }
}

namespace {

// Re-derives every fibre condition from the chain words alone; kept separate
// from the solver's own residual check on purpose.
void check_ruling_against_chains(i64 p, i64 q, const RulingSolution& sol) {
    const std::vector<i64> bw = wahl_chain(p, q).wahl.coeffs;
    const std::vector<i64> dt = compactifying_divisor(p, q).tail();
    const std::size_t m = bw.size(), n = dt.size();
    REQUIRE(sol.alpha.size() == m - 1);
    REQUIRE(sol.beta.size() == n);
    REQUIRE(sol.r == m);
    REQUIRE(sol.s == n);
    REQUIRE(sol.epsilon == p * q - 1);
    for (i64 v : sol.alpha) REQUIRE(v >= 1);
    for (i64 v : sol.beta) REQUIRE(v >= 1);

    auto mult_c = [&](std::size_t j) { return (j >= 2 && j <= m) ? sol.alpha[j - 2] : 0; };
    auto mult_d = [&](std::size_t i) { return (i >= 1 && i <= n) ? sol.beta[i - 1] : 0; };
    CHECK(mult_c(2) + (sol.r == 1 ? sol.epsilon : 0) == 1);
    CHECK(mult_d(1) == 1);
    for (std::size_t j = 2; j <= m; ++j)
        CHECK(-bw[j - 1] * mult_c(j) + mult_c(j - 1) + mult_c(j + 1) +
                  (sol.r == j ? sol.epsilon : 0) ==
              0);
    for (std::size_t i = 1; i <= n; ++i)
        CHECK(-dt[i - 1] * mult_d(i) + mult_d(i - 1) + mult_d(i + 1) +
                  (sol.s == i ? sol.epsilon : 0) ==
              0);
    CHECK(mult_c(sol.r) + mult_d(sol.s) - sol.epsilon == 0);
}

} // namespace

TEST_CASE("broken ruling solutions") {
    RulingSolution s41 = broken_ruling_solve(make_basis(4, 1));
    CHECK(s41.alpha == std::vector<i64>{1, 2});
    CHECK(s41.beta == std::vector<i64>{1});
    CHECK(s41.epsilon == 3);
    CHECK(s41.r == 3);
    CHECK(s41.s == 1);

    RulingSolution s21 = broken_ruling_solve(make_basis(2, 1));
    CHECK(s21.alpha.empty());
    CHECK(s21.beta == std::vector<i64>{1});
    CHECK(s21.epsilon == 1);
    CHECK(s21.r == 1);
    CHECK(s21.s == 1);

    RulingSolution s52 = broken_ruling_solve(make_basis(5, 2));
    CHECK(s52.alpha == std::vector<i64>{1, 5});
    CHECK(s52.beta == std::vector<i64>{1, 2, 3, 4});
    CHECK(s52.epsilon == 9);
    CHECK(s52.r == 3);
    CHECK(s52.s == 4);

    check_ruling_against_chains(4, 1, s41);
    check_ruling_against_chains(2, 1, s21);
    check_ruling_against_chains(5, 2, s52);
    for (auto [p, q] : coprime_pairs(50))
        check_ruling_against_chains(p, q, broken_ruling_solve(make_basis(p, q)));
}

TEST_CASE("two ruling exclusion") {
    for (auto [p, q] : coprime_pairs(50)) CHECK(two_ruling_exclusion(p, q));
}

TEST_CASE("tail fractions share only the accompanying value one") {
    CHECK(shared_accompanying_check(5, 2));
    CHECK(shared_accompanying_check(3, 2));
    CHECK_THROWS_AS(shared_accompanying_check(4, 1), std::domain_error);

    for (auto [p, q] : coprime_pairs(50)) {
        if (q == 1) continue;
        CHECK(shared_accompanying_check(p, q));

        // The two tails really are dual fractions of each other.
        const i64 num = p * q - 1;
        const i64 b1 = wahl_chain(p, q).wahl.coeffs.front();
        CHECK(hj_dual(Rational(num, b1 * num - p * p)).coeffs ==
              compactifying_divisor(p, q).tail());
    }
}

TEST_CASE("contraction trace of the (4,1) fibre") {
    ContractionTrace tr = contraction_simulator(4, 1);
    CHECK(tr.states == std::vector<std::vector<i64>>{
                           {-2, -2, -1, -3}, {-2, -1, -2}, {-1, -1}, {0}});
    CHECK(tr.contracted == std::vector<std::size_t>{3, 2, 1});
    CHECK(tr.c1_initial == -6);
    CHECK(tr.c1_final == -5);
    CHECK(tr.d0 == 5);
    CHECK(tr.steps == 3);
    CHECK(tr.betti == 5);
}

TEST_CASE("contraction trace of the (2,1) fibre") {
    ContractionTrace tr = contraction_simulator(2, 1);
    CHECK(tr.states == std::vector<std::vector<i64>>{{-1, -1}, {0}});
    CHECK(tr.contracted == std::vector<std::size_t>{1});
    CHECK(tr.c1_initial == -4);
    CHECK(tr.c1_final == -3);
    CHECK(tr.d0 == 3);
    CHECK(tr.steps == 1);
}

TEST_CASE("contraction trace of the (5,2) fibre") {
    ContractionTrace tr = contraction_simulator(5, 2);
    CHECK(tr.states == std::vector<std::vector<i64>>{{-5, -2, -1, -3, -2, -2, -2},
                                                     {-5, -1, -2, -2, -2, -2},
                                                     {-4, -1, -2, -2, -2},
                                                     {-3, -1, -2, -2},
                                                     {-2, -1, -2},
                                                     {-1, -1},
                                                     {0}});
    CHECK(tr.contracted == std::vector<std::size_t>{3, 2, 2, 2, 2, 1});
    CHECK(tr.c1_initial == -3);
    CHECK(tr.c1_final == -2);
    CHECK(tr.d0 == 2);
    CHECK(tr.steps == 6);
}

TEST_CASE("contraction sweep") {
    for (auto [p, q] : coprime_pairs(50)) {
        const std::size_t m = wahl_chain(p, q).wahl.size();
        const CompactificationData comp = compactifying_divisor(p, q);
        const std::size_t n = comp.n();

        ContractionTrace tr = contraction_simulator(p, q);
        CHECK(tr.steps == m + n - 1);
        CHECK(tr.betti == m + n + 1);
        CHECK(tr.contracted.size() == tr.steps);
        CHECK(tr.states.front().size() == m + n);
        CHECK(tr.c1_final == -comp.d0);

        // The divisor-only blow-down reaches the same Hirzebruch surface in
        // n-1 steps, so the fibre side accounts for exactly m more.
        if (q != 1) {
            BlowdownTrace base = blowdown_to_hirzebruch(p, q);
            CHECK(base.hirzebruch_degree == comp.d0);
            CHECK(tr.steps - base.states.size() == m);
        }
    }
}
