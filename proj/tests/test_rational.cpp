#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>

#include "pinwheel/rational.hpp"

using pinwheel::Rational;

TEST_CASE("construction reduces and normalizes sign") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(-6, 4) == Rational(-3, 2));
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(-6, -4) == Rational(3, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(0, -7).den == 1);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("field arithmetic") {
    Rational a(3, 4), b(5, 6);
    CHECK(a + b == Rational(19, 12));
    CHECK(a - b == Rational(-1, 12));
    CHECK(a * b == Rational(5, 8));
    CHECK(a / b == Rational(9, 10));
    CHECK(-a == Rational(-3, 4));
    CHECK_THROWS_AS(a / Rational(0), std::domain_error);
}

TEST_CASE("ordering is exact") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(7, 5) >= Rational(7, 5));
    CHECK(Rational(1000000007LL, 3) > Rational(999999999LL, 3));
}

TEST_CASE("random field identities") {
    std::mt19937_64 rng(20260816u);
    std::uniform_int_distribution<long long> num(-1000, 1000);
    std::uniform_int_distribution<long long> den(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(a - a == Rational(0));
    }
}

TEST_CASE("overflow is detected, not wrapped") {
    Rational big(INT64_MAX, 1);
    CHECK_THROWS_AS(big * Rational(3), std::overflow_error);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    // Intermediate 128-bit products that reduce back into range are fine.
    Rational x(INT64_MAX / 3, 2);
    CHECK(x * Rational(2) == Rational(INT64_MAX / 3));
}

TEST_CASE("string form") {
    CHECK(Rational(25, 9).to_string() == "25/9");
    CHECK(Rational(-3, 5).to_string() == "-3/5");
    CHECK(Rational(7).to_string() == "7");
}
