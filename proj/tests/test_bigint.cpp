#include "doctest.h"

#include <numeric>

#include "spreadec/bigint.hpp"
#include "spreadec/rng.hpp"

using namespace spreadec;

TEST_CASE("biguint agrees with 64-bit arithmetic on random operands") {
    Rng rng(0x5eed);
    for (int i = 0; i < 2000; ++i) {
        const uint64_t a = rng.next_u64() >> (rng.below(40));
        const uint64_t b = rng.next_u64() >> (rng.below(40));
        BigUint A(a), B(b);
        if (a <= UINT64_MAX - b) CHECK((A + B).to_u64() == a + b);
        if (a >= b) CHECK((A - B).to_u64() == a - b);
        if (b != 0) {
            auto dm = BigUint::divmod(A, B);
            CHECK(dm.quotient.to_u64() == a / b);
            CHECK(dm.remainder.to_u64() == a % b);
            CHECK(BigUint::gcd(A, B).to_u64() == std::gcd(a, b));
        }
        const uint64_t sa = a >> 33, sb = b >> 33;
        CHECK((BigUint(sa) * BigUint(sb)).to_u64() == sa * sb);
        CHECK(BigUint(a).to_string() == std::to_string(a));
    }
}

TEST_CASE("biguint multi-limb identities") {
    BigUint two_pow_100 = BigUint::pow(BigUint(2), 100);
    CHECK(two_pow_100.to_string() == "1267650600228229401496703205376");
    CHECK(two_pow_100.bit_length() == 101);
    BigUint p5 = BigUint::pow(BigUint(5), 40);
    auto dm = BigUint::divmod(p5 * p5, p5);
    CHECK(dm.quotient == p5);
    CHECK(dm.remainder.is_zero());
    CHECK((p5 * BigUint(0)).is_zero());
    CHECK(BigUint::gcd(two_pow_100, p5) == BigUint(1));
    CHECK_THROWS_AS(BigUint::divmod(p5, BigUint(0)), std::invalid_argument);
    CHECK_THROWS_AS(BigUint(1) - BigUint(2), std::invalid_argument);
}

TEST_CASE("bigint signs") {
    BigInt a(-7), b(3);
    CHECK((a + b) == BigInt(-4));
    CHECK((a * b) == BigInt(-21));
    CHECK((a - b) == BigInt(-10));
    CHECK((-a) == BigInt(7));
    CHECK(a < b);
    CHECK(BigInt(-1) < BigInt(0));
    CHECK(a.to_string() == "-7");
    CHECK(BigInt::div_exact(BigInt(-21), BigInt(3)) == BigInt(-7));
    CHECK_THROWS_AS(BigInt::div_exact(BigInt(7), BigInt(2)), std::logic_error);
}

TEST_CASE("rationals reduce and obey field axioms") {
    CHECK(Rational(6, 8) == Rational(3, 4));
    CHECK(Rational(2, -3) == Rational(-2, 3));
    CHECK(Rational(0, 5).to_string() == "0");
    CHECK(Rational(9, 7).to_string() == "9/7");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);

    Rng rng(99);
    auto draw = [&] {
        int64_t n = static_cast<int64_t>(rng.below(2001)) - 1000;
        int64_t d = static_cast<int64_t>(rng.below(999)) + 1;
        return Rational(n, d);
    };
    for (int i = 0; i < 500; ++i) {
        Rational a = draw(), b = draw(), c = draw();
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + Rational(0) == a);
        CHECK(a * Rational(1) == a);
        CHECK(a - a == Rational(0));
        if (!b.is_zero()) CHECK(a / b * b == a);
    }
    CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(Rational(1, 2) < Rational(2, 3));
    CHECK(Rational(-1, 2) < Rational(1, 3));
}
