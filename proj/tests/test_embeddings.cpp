#include <catch2/catch_amalgamated.hpp>

#include <pinwheel/chain_algebra.hpp>
#include <pinwheel/embeddings.hpp>
#include <pinwheel/hj.hpp>

#include <numeric>
#include <random>

using namespace pinwheel;

namespace {

std::vector<std::pair<i64, i64>> coprime_pairs(i64 max_p) {
    std::vector<std::pair<i64, i64>> out;
    for (i64 p = 2; p <= max_p; ++p)
        for (i64 q = 1; q < p; ++q)
            if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    return out;
}

Rational random_positive_rational(std::mt19937& rng) {
    std::uniform_int_distribution<i64> num(1, 400);
    std::uniform_int_distribution<i64> den(1, 40);
    return Rational(num(rng), den(rng));
}

} // namespace

TEST_CASE("direction of the last Wahl sphere") {
    CHECK(cm_direction(2, 1) == IntVec2{1, 0});
    CHECK(cm_direction(5, 2) == IntVec2{14, 5});
    CHECK(cm_direction(3, 1) == IntVec2{5, 1});
    CHECK(cm_direction(5, 3) == IntVec2{9, 5});

    for (auto [p, q] : coprime_pairs(100)) {
        const IntVec2 v = cm_direction(p, q);
        CHECK(v.x == p * p - (p * q + 1));
        CHECK(v.y == p * q - (q * q + 1));
        CHECK(is_primitive(v));
        CHECK(v.x > 0);
        CHECK(v.y >= 0); // zero only at (2,1)
        if (v.y == 0) CHECK((p == 2 && q == 1));
    }
}

TEST_CASE("area and coefficient frozen values") {
    CHECK(cm_area(2, 1, Rational(1)) == Rational(4));
    CHECK(cm_area(5, 2, Rational(1)) == Rational(25, 14));
    CHECK(cm_area(5, 2, Rational(0)) == Rational(0));
    CHECK(cm_area(7, 3, Rational(2, 3)) == Rational(2 * 49, 3 * 27));

    CHECK(cm_coefficient(2, 1) == Rational(-1, 4));
    CHECK(cm_coefficient(5, 2) == Rational(-14, 25));

    // The numerator magnitude inverts pq-1 mod p^2.
    for (auto [p, q] : coprime_pairs(60)) {
        const i64 inv = mod_inverse(p * q - 1, p * p);
        CHECK(cm_coefficient(p, q) == Rational(-inv, p * p));
        CHECK(cm_area(p, q, Rational(1)) == Rational(p * p, inv));
    }
}

TEST_CASE("coefficient agrees with the chain inverse") {
    for (auto [p, q] : coprime_pairs(40)) {
        const WahlData w = wahl_chain(p, q);
        const AccompanyingNumbers acc = accompanying(w.wahl, p * p, p * q - 1);
        const RationalMatrix inv = inverse_closed_form(acc);
        const std::size_t m = w.wahl.coeffs.size();

        CHECK(inv.at(m - 1, m - 1) == cm_coefficient(p, q));
        // First slot of the same column carries -e_1 f_m / p^2 = -1/p^2; it
        // matches the last slot only when the chain has length one.
        CHECK(inv.at(0, m - 1) == Rational(-1, p * p));
        if (m == 1) CHECK(cm_coefficient(p, q) == Rational(-1, p * p));
    }
}

TEST_CASE("area times coefficient cancels exactly") {
    std::mt19937 rng(20260816);
    for (auto [p, q] : coprime_pairs(50)) {
        const Rational c = cm_coefficient(p, q);
        CHECK(cm_area(p, q, Rational(1)) * (-c) == Rational(1));
        for (int k = 0; k < 4; ++k) {
            const Rational t_alpha = random_positive_rational(rng);
            CHECK(cm_area(p, q, t_alpha) * (-c) == t_alpha);
        }
    }
}

TEST_CASE("verdict examples") {
    NonsqueezeQuery boundary{2, 1, Rational(1), Rational(1), CylinderKind::first_axis};
    NonsqueezeVerdict v = nonsqueeze_verdict(boundary);
    CHECK(v.allowed);
    CHECK(v.bound == Rational(1));
    CHECK(v.coefficient == Rational(-1, 4));
    CHECK(v.area_scale == Rational(4));
    CHECK_FALSE(v.cylinders_distinct);

    NonsqueezeQuery squeezed{5, 2, Rational(2), Rational(1), CylinderKind::first_axis};
    v = nonsqueeze_verdict(squeezed);
    CHECK_FALSE(v.allowed);
    CHECK(v.bound == Rational(1));
    CHECK(v.cylinders_distinct);

    NonsqueezeQuery small{5, 2, Rational(1, 2), Rational(1), CylinderKind::second_axis};
    v = nonsqueeze_verdict(small);
    CHECK(v.allowed);

    CHECK_THROWS_AS(
        nonsqueeze_verdict(NonsqueezeQuery{5, 2, Rational(0), Rational(1), CylinderKind::first_axis}),
        std::domain_error);
    CHECK_THROWS_AS(
        nonsqueeze_verdict(NonsqueezeQuery{5, 2, Rational(1), Rational(-1), CylinderKind::first_axis}),
        std::domain_error);
}

TEST_CASE("verdict boundary and monotonicity") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<i64> pick_p(2, 20);
    int cases = 0;
    while (cases < 100) {
        const i64 p = pick_p(rng);
        std::uniform_int_distribution<i64> pick_q(1, p - 1);
        const i64 q = pick_q(rng);
        if (std::gcd(p, q) != 1) continue;
        ++cases;
        const Rational alpha = random_positive_rational(rng);
        const Rational lambda = random_positive_rational(rng);
        for (CylinderKind kind : {CylinderKind::first_axis, CylinderKind::second_axis}) {
            const NonsqueezeVerdict v = nonsqueeze_verdict({p, q, alpha, lambda, kind});
            CHECK(v.allowed == (alpha <= lambda));
            CHECK(v.bound == lambda);
            // The boundary itself embeds.
            CHECK(nonsqueeze_verdict({p, q, lambda, lambda, kind}).allowed);
            if (v.allowed) {
                const Rational smaller = alpha * Rational(2, 3);
                CHECK(nonsqueeze_verdict({p, q, smaller, lambda, kind}).allowed);
            }
        }
    }
}

TEST_CASE("both cylinder shapes impose the same bound") {
    std::mt19937 rng(11);
    for (auto [p, q] : coprime_pairs(15)) {
        const Rational alpha = random_positive_rational(rng);
        const Rational lambda = random_positive_rational(rng);
        const NonsqueezeVerdict first =
            nonsqueeze_verdict({p, q, alpha, lambda, CylinderKind::first_axis});
        const NonsqueezeVerdict second =
            nonsqueeze_verdict({p, q, alpha, lambda, CylinderKind::second_axis});
        CHECK(first.allowed == second.allowed);
        CHECK(first.bound == second.bound);
        CHECK(first.cylinders_distinct == second.cylinders_distinct);
        CHECK(first.cylinders_distinct == (p >= 3));
    }
}

TEST_CASE("classification examples") {
    ClassificationResult r = classify_pinwheels(5, 2);
    REQUIRE(r.admissible.size() == 2);
    CHECK(r.admissible[0] == std::pair<i64, i64>{5, 2});
    CHECK(r.admissible[1] == std::pair<i64, i64>{5, 3});

    r = classify_pinwheels(2, 1);
    REQUIRE(r.admissible.size() == 1);
    CHECK(r.admissible[0] == std::pair<i64, i64>{2, 1});

    // Divisor candidates with l >= 2 die on the adjunction count: for (8,1)
    // the pair (4,3) would need 1/4 - 1 + (e-1)(f-1) = 0 with an integer tail.
    r = classify_pinwheels(8, 1);
    REQUIRE(r.admissible.size() == 2);
    CHECK(r.admissible[0] == std::pair<i64, i64>{8, 1});
    CHECK(r.admissible[1] == std::pair<i64, i64>{8, 7});
    for (const auto& mn : r.admissible) CHECK(mn.first == 8);
}

TEST_CASE("classification sweep") {
    for (auto [p, q] : coprime_pairs(50)) {
        const ClassificationResult r = classify_pinwheels(p, q);
        CHECK(r.p == p);
        CHECK(r.q == q);
        std::vector<std::pair<i64, i64>> expected;
        if (q == p - q) {
            expected = {{p, q}};
        } else {
            expected = {{p, std::min(q, p - q)}, {p, std::max(q, p - q)}};
        }
        CHECK(r.admissible == expected);
        for (const auto& [m, n] : r.admissible) CHECK(std::gcd(m, n) == 1);
    }
}

TEST_CASE("classification end values invert mod p squared") {
    // The two survivors correspond to the two end slots: the e*f value at one
    // end is pn-1 and at the other its inverse mod p^2, namely p(p-n)-1.
    for (auto [p, q] : coprime_pairs(40)) {
        for (const auto& [m, n] : classify_pinwheels(p, q).admissible) {
            CHECK(m == p);
            CHECK(mod_inverse(p * n - 1, p * p) == p * (p - n) - 1);
            const bool hits = (p * n - 1 == p * q - 1) || (p * (p - n) - 1 == p * q - 1);
            CHECK(hits);
        }
    }
}
