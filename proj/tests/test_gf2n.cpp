#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>

#include <anfsat/gf2n.hpp>

using namespace anfsat;

TEST_CASE("polynomial helpers over GF(2)") {
    CHECK(gf2::poly_degree(0) == -1);
    CHECK(gf2::poly_degree(1) == 0);
    CHECK(gf2::poly_degree(0b1011) == 3);
    CHECK(gf2::poly_mod(0b100, 0b111) == 0b11);     // x^2 mod (x^2+x+1) = x+1
    CHECK(gf2::poly_mod(0b1011, 0b1011) == 0);
    CHECK(gf2::poly_gcd(0b110, 0b100) == 0b10);     // gcd(x^2+x, x^2) = x
    CHECK(gf2::poly_gcd(0b111, 0b11) == 1);
    CHECK(gf2::poly_mulmod(0b10, 0b10, 0b111) == 0b11);
}

TEST_CASE("the Rabin test separates irreducible from composite polynomials") {
    CHECK(gf2::is_irreducible(0b111));      // x^2+x+1
    CHECK(gf2::is_irreducible(0b1011));     // x^3+x+1
    CHECK(gf2::is_irreducible(0b1101));     // x^3+x^2+1
    CHECK(gf2::is_irreducible(0b10011));    // x^4+x+1
    CHECK(gf2::is_irreducible(0b11111));     // x^4+x^3+x^2+x+1
    CHECK_FALSE(gf2::is_irreducible(0b101)); // (x+1)^2
    CHECK_FALSE(gf2::is_irreducible(0b110)); // x(x+1)
    CHECK_FALSE(gf2::is_irreducible(0b1111)); // (x+1)^3
    CHECK_FALSE(gf2::is_irreducible(0b10101)); // (x^2+x+1)^2
}

TEST_CASE("every table entry is an irreducible polynomial of its degree") {
    for (unsigned n = 2; n <= 32; ++n) {
        std::uint64_t f = kReductionPoly[n - 2];
        INFO("degree " << n);
        CHECK(gf2::poly_degree(f) == static_cast<int>(n));
        CHECK(gf2::is_irreducible(f));
    }
}

TEST_CASE("contexts reject degrees outside the supported range") {
    CHECK_THROWS_AS(BinaryFieldContext(0), std::invalid_argument);
    CHECK_THROWS_AS(BinaryFieldContext(1), std::invalid_argument);
    CHECK_THROWS_AS(BinaryFieldContext(33), std::invalid_argument);
    CHECK_NOTHROW(BinaryFieldContext(2));
    CHECK_NOTHROW(BinaryFieldContext(32));
}

TEST_CASE("small-field multiplication table facts") {
    BinaryFieldContext f8(3); // x^3+x+1
    CHECK(f8.order() == 8);
    CHECK(f8.mask() == 0b111);
    CHECK(f8.mul(0b010, 0b100) == 0b011);  // t * t^2 = t^3 = t+1
    CHECK(f8.mul(0b011, 0b011) == 0b101);  // (t+1)^2 = t^2+1
    CHECK(f8.sq(0b010) == 0b100);
    CHECK(f8.pow(0b010, 7) == 1);          // multiplicative order divides 7
    CHECK(f8.inv(0b010) == 0b101);         // t * (t^2+1) = t^3+t = 1
}

TEST_CASE("field axioms hold for random triples") {
    std::mt19937_64 rng(0xF1E1D);
    for (unsigned n : {2u, 3u, 8u, 13u, 17u, 32u}) {
        BinaryFieldContext F(n);
        for (int trial = 0; trial < 2000; ++trial) {
            std::uint64_t a = rng() & F.mask();
            std::uint64_t b = rng() & F.mask();
            std::uint64_t c = rng() & F.mask();
            CHECK(F.add(a, a) == 0);
            CHECK(F.mul(a, 1) == a);
            CHECK(F.mul(a, b) == F.mul(b, a));
            CHECK(F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            CHECK(F.sq(F.add(a, b)) == F.add(F.sq(a), F.sq(b))); // Frobenius
        }
    }
}

TEST_CASE("inverses and the multiplicative group order") {
    std::mt19937_64 rng(0x1BADB);
    for (unsigned n : {4u, 11u, 16u, 29u}) {
        BinaryFieldContext F(n);
        CHECK_THROWS_AS(F.inv(0), std::invalid_argument);
        for (int trial = 0; trial < 200; ++trial) {
            std::uint64_t a = rng() & F.mask();
            if (a == 0) continue;
            CHECK(F.mul(a, F.inv(a)) == 1);
            CHECK(F.pow(a, F.order() - 1) == 1); // Lagrange
        }
    }
}

TEST_CASE("exponentiation reduces its base and composes") {
    BinaryFieldContext F(5);
    std::mt19937_64 rng(0xE4B);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint64_t a = rng() & F.mask();
        std::uint64_t i = rng() % 40, j = rng() % 40;
        CHECK(F.pow(a, i + j) == F.mul(F.pow(a, i), F.pow(a, j)));
    }
    CHECK(F.pow(0, 0) == 1);
    CHECK(F.pow(7, 1) == 7);
}
