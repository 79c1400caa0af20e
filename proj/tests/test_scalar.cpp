#include "wg/scalar.hpp"

#include <random>

#include "doctest.h"

using namespace wg;

namespace {
constexpr int N = 2520;
Scalar q() { return Scalar::generator(N); }
Scalar z(int k) { return Scalar::root_of_unity(k, N); }
} // namespace

TEST_CASE("multiplication basics") {
    CHECK(q().pow(2) * q().pow(-2) == Scalar::one(N));
    CHECK(z(6) * z(6).pow(2) == z(6).pow(3));
    CHECK(z(6).pow(3) == Scalar::minus_one(N));
    Scalar minus_q = Scalar::minus_one(N) * q();
    CHECK(minus_q.free_exp() == 1);
    CHECK(minus_q.tor_exp() == N / 2);
}

TEST_CASE("mismatched torsion orders are rejected") {
    CHECK_THROWS_AS(Scalar::generator(12) * Scalar::generator(24), ConfigError);
}

TEST_CASE("torsion config demands an even order") {
    CHECK(TorsionConfig().modulus == 2520);
    CHECK(TorsionConfig(12).modulus == 12);
    CHECK_THROWS_AS(TorsionConfig(7), std::invalid_argument);
    CHECK_THROWS_AS(TorsionConfig(0), std::invalid_argument);
    // roots of unity of unavailable order are rejected as configuration errors
    CHECK_THROWS_AS(Scalar::root_of_unity(9, 12), ConfigError);
}

TEST_CASE("orders") {
    CHECK_FALSE(q().order().has_value());
    CHECK(scalar_order_or_zero(q()) == 0);
    CHECK(scalar_order_or_zero(z(6).pow(2)) == 3);
    CHECK(scalar_order_or_zero(z(6).pow(3)) == 2);
    CHECK(scalar_order_or_zero(Scalar::one(N)) == 1);
}

TEST_CASE("primitive root membership") {
    CHECK(is_primitive_root(z(6).pow(2), 3));
    CHECK_FALSE(is_primitive_root(z(6).pow(2), 6));
    // -zeta_3 = zeta_6^5 has order 6
    CHECK(is_primitive_root(Scalar::minus_one(N) * z(3), 6));
}

TEST_CASE("parsing") {
    CHECK(parse_scalar("q^-2") == q().pow(-2));
    CHECK(parse_scalar("-z3") == Scalar(0, 5 * N / 6, N));
    CHECK(parse_scalar("-1") == Scalar::minus_one(N));
    CHECK(parse_scalar("1") == Scalar::one(N));
    CHECK(parse_scalar("q^2*z5^3") == q().pow(2) * z(5).pow(3));
    CHECK(parse_scalar("-q^-1*z3") == Scalar::minus_one(N) * q().inverse() * z(3));
    CHECK_THROWS_AS(parse_scalar(""), ParseError);
    CHECK_THROWS_AS(parse_scalar("w"), ParseError);
    CHECK_THROWS_AS(parse_scalar("z7^2", 12), ParseError); // 7 does not divide 12
    CHECK_THROWS_AS(parse_scalar("q^"), ParseError);
    CHECK_THROWS_AS(parse_scalar("q*"), ParseError);
}

TEST_CASE("canonical printing") {
    CHECK(to_string(Scalar::one(N)) == "1");
    CHECK(to_string(Scalar::minus_one(N)) == "-1");
    CHECK(to_string(q()) == "q");
    CHECK(to_string(q().pow(-2)) == "q^-2");
    CHECK(to_string(Scalar::minus_one(N) * q()) == "-q");
    CHECK(to_string(z(3)) == "z3");
    CHECK(to_string(Scalar::minus_one(N) * z(3)) == "-z3");
    CHECK(to_string(Scalar::minus_one(N) * z(3).pow(-1)) == "-z3^-1");
    CHECK(to_string(z(5).pow(3)) == "z5^-2");
}

TEST_CASE("group axioms and order bounds on random scalars") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long long> fe(-6, 6);
    std::uniform_int_distribution<int> te(0, N - 1);
    auto rand_scalar = [&]() { return Scalar(fe(rng), te(rng), N); };
    for (int it = 0; it < 500; ++it) {
        Scalar a = rand_scalar(), b = rand_scalar(), c = rand_scalar();
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * a.inverse() == Scalar::one(N));
        CHECK(a * Scalar::one(N) == a);
        auto oa = a.order(), ob = b.order(), oab = (a * b).order();
        if (oa && ob) {
            REQUIRE(oab.has_value());
            long long l = std::lcm(*oa, *ob);
            CHECK(l % *oab == 0);
        }
    }
}

TEST_CASE("print/parse round trip on random scalars") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long long> fe(-9, 9);
    std::uniform_int_distribution<int> te(0, N - 1);
    for (int it = 0; it < 2000; ++it) {
        Scalar a(fe(rng), te(rng), N);
        CHECK(parse_scalar(to_string(a)) == a);
    }
}

TEST_CASE("cartan exponent arithmetic") {
    auto m = [&](const Scalar& p, const Scalar& r) { return cartan_exponent(p, r); };
    // generic p: unique candidate from the free part
    CHECK(m(q(), q().inverse()) == 1);
    CHECK(m(q(), q().pow(-2)) == 2);
    CHECK_FALSE(m(q(), q()).has_value());
    CHECK(m(q(), Scalar::one(N)) == 0);
    // p = -1 escapes through the torsion branch at m = 1
    CHECK(m(Scalar::minus_one(N), q()) == 1);
    CHECK(m(Scalar::minus_one(N), Scalar::one(N)) == 0);
    // root-of-unity p: smallest of congruence solution and order escape
    CHECK(m(z(3), z(3).pow(-1)) == 1);
    CHECK(m(z(3), q()) == 2);        // only the escape works
    CHECK(m(z(6), z(6).pow(-4)) == 4); // congruence beats the escape at 5
    CHECK(m(Scalar::one(N), q()) == std::nullopt);
}
