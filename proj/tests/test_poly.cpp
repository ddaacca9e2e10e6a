#include <doctest.h>

#include "ilt/poly.hpp"
#include "testutil.hpp"

using namespace ilt;
using testutil::random_nonzero_poly;
using testutil::random_poly;

TEST_SUITE_BEGIN("poly");

namespace {
// 2 symbols: x=0, y=1
Poly sym(int s, uint32_t k = 1) { return Poly::symbol(2, s, k); }
Poly cst(long c) { return Poly(2, c); }
}  // namespace

TEST_CASE("graded lex ordering puts leading term first") {
    Poly p = sym(1, 3) + sym(0) * sym(1) + cst(7);  // y^3 + x*y + 7
    CHECK(total_degree(p.leading_exponents()) == 3);
    Poly q = sym(0) * sym(1) + sym(1, 2);  // x*y vs y^2: same degree, x first
    CHECK(q.leading_exponents() == Exponents{1, 1});
}

TEST_CASE("arithmetic basics") {
    Poly x = sym(0), y = sym(1);
    CHECK((x + y) * (x - y) == x * x - y * y);
    CHECK((x + y) * (x + y) == x * x + x * y * cst(2) + y * y);
    CHECK((x - x).is_zero());
    CHECK(x * Poly(2) == Poly(2));  // times zero polynomial
}

TEST_CASE("exact division") {
    Poly x = sym(0), y = sym(1);
    Poly a = x * x - y * y;
    auto q = divide_exact(a, x - y);
    REQUIRE(q.has_value());
    CHECK(*q == x + y);
    CHECK(!divide_exact(a + cst(1), x - y).has_value());
    CHECK(!divide_exact(x, cst(2)).has_value());
    CHECK(*divide_exact(x * cst(6), cst(3)) == x * cst(2));
}

TEST_CASE("gcd of univariate polynomials") {
    Poly x = sym(0), y = sym(1);
    CHECK(poly_gcd(x * x - cst(1), x - cst(1)) == x - cst(1));
    CHECK(poly_gcd(x * x - cst(1), x + cst(2)).is_one());
    CHECK(poly_gcd(cst(4) * x, cst(6) * x * x) == cst(2) * x);
    CHECK(poly_gcd(Poly(2), y) == y);
    // sign normalization: positive leading coefficient
    CHECK(poly_gcd(-x, -x) == x);
}

TEST_CASE("gcd of multivariate polynomials") {
    Poly x = sym(0), y = sym(1);
    Poly g = x * y + cst(1);
    Poly a = g * (x + y);
    Poly b = g * (x - y);
    CHECK(poly_gcd(a, b) == g);
    Poly c = (x + y) * (x + y) * y;
    Poly d = (x + y) * x;
    CHECK(poly_gcd(c, d) == x + y);
}

TEST_CASE("gcd divides both arguments, randomized") {
    testutil::Rng rng(2024);
    for (int i = 0; i < 60; ++i) {
        Poly a = random_poly(rng, 2, 3, 2);
        Poly b = random_poly(rng, 2, 3, 2);
        Poly common = random_nonzero_poly(rng, 2, 2, 1);
        Poly g = poly_gcd(a * common, b * common);
        if ((a * common).is_zero() && (b * common).is_zero()) continue;
        CHECK(divide_exact(a * common, g).has_value());
        CHECK(divide_exact(b * common, g).has_value());
        // the planted factor divides the gcd
        CHECK(divide_exact(g, poly_gcd(common, g)).has_value());
        if (!a.is_zero() && !b.is_zero()) {
            CHECK(divide_exact(g, common).has_value());
        }
    }
}

TEST_CASE("square root detection") {
    Poly x = sym(0), y = sym(1);
    Poly s = x * y + x - cst(3);
    auto r = poly_sqrt(s * s);
    REQUIRE(r.has_value());
    CHECK(*r == s);
    CHECK(!poly_sqrt(x).has_value());
    CHECK(!poly_sqrt(x * x + cst(1)).has_value());
    CHECK(!poly_sqrt(cst(-4)).has_value());
    CHECK(*poly_sqrt(cst(9)) == cst(3));
    CHECK(*poly_sqrt(x * x * cst(4)) == x * cst(2));
    // sign normalization even when the natural root is negative
    CHECK(*poly_sqrt((-s) * (-s)) == s);
}

TEST_CASE("square root randomized") {
    testutil::Rng rng(99);
    for (int i = 0; i < 40; ++i) {
        Poly s = random_nonzero_poly(rng, 2, 3, 2);
        auto r = poly_sqrt(s * s);
        REQUIRE(r.has_value());
        CHECK(*r * *r == s * s);
    }
}

TEST_CASE("derivative power rule") {
    Poly x = sym(0), y = sym(1);
    CHECK((x * x).derivative(0) == cst(2) * x);
    CHECK((x * y * y).derivative(1) == cst(2) * x * y);
    CHECK(cst(5).derivative(0).is_zero());
}

TEST_CASE("to_string canonical form") {
    Poly x = sym(0), y = sym(1);
    std::vector<std::string> names{"x", "y"};
    CHECK(poly_to_string(x * x + y, names) == "x^2 + y");
    CHECK(poly_to_string(-x + cst(1), names) == "-x + 1");
    CHECK(poly_to_string(Poly(2), names) == "0");
    CHECK(poly_to_string(cst(2) * x * y, names) == "2*x*y");
}

TEST_SUITE_END();
