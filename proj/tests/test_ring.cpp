#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dmflag/poly.hpp"
#include "test_util.hpp"

using namespace dmflag;

namespace {
PolyRing R2() { return PolyRing::standard(2); }
Polynomial P(const PolyRing& r, const std::string& s) {
    return Polynomial::parse(r, s);
}
}  // namespace

TEST_CASE("poly_arith basic examples") {
    PolyRing r = R2();
    CHECK(poly_arith(P(r, "x1"), P(r, "x2"), PolyOp::add) == P(r, "x1 + x2"));
    CHECK(poly_arith(P(r, "x1*x2"), P(r, "x1*x2"), PolyOp::sub).is_zero());
    // The (1,1) entry of d^2 for the rank-2 degree-2 base matrix.
    Polynomial d2 = P(r, "x1*x2") * P(r, "x1*x2") - P(r, "x2^2") * P(r, "x1^2");
    CHECK(d2.is_zero());
}

TEST_CASE("poly_arith rejects ring mismatch") {
    PolyRing a = R2(), b = PolyRing::standard(3);
    CHECK_THROWS_AS(poly_arith(P(a, "x1"), P(b, "x3"), PolyOp::add),
                    RingMismatch);
}

TEST_CASE("homogeneous_degree") {
    PolyRing r = R2();
    CHECK(*P(r, "x1^2 + x1*x2").homogeneous_degree() == 2);
    CHECK(!P(r, "x1 + x2^2").homogeneous_degree().has_value());
    CHECK_THROWS(P(r, "0").homogeneous_degree());
    CHECK(P(r, "0").is_homogeneous_of_degree(3));
    // Cubic coefficients like the ones in the quadruple-cube flag.
    PolyRing r4 = PolyRing::standard(4);
    CHECK(*P(r4, "x1^3").homogeneous_degree() == 3);
}

TEST_CASE("weighted degrees follow ring weights") {
    PolyRing r({"x", "y"}, 0, {1, 3});
    CHECK(*P(r, "x^3 + y").homogeneous_degree() == 3);
    CHECK(P(r, "x*y").degree() == 4);
}

TEST_CASE("monomial_compare grevlex and lex") {
    PolyRing r = R2();
    Monomial x1sq({2, 0}), x1x2({1, 1}), x1({1, 0}), x2({0, 1});
    CHECK(monomial_compare(x1sq, x1x2, MonomialOrder::grevlex) ==
          Ordering::greater);
    CHECK(monomial_compare(x2, x1, MonomialOrder::lex) == Ordering::less);
    CHECK(monomial_compare(x1x2, x1x2, MonomialOrder::grevlex) ==
          Ordering::equal);
}

TEST_CASE("ring axioms on randomized inputs") {
    std::mt19937 rng(20240817);
    for (uint64_t p : {uint64_t(0), uint64_t(32003)}) {
        PolyRing r = PolyRing::standard(3, p);
        for (int it = 0; it < 40; ++it) {
            Polynomial a = testutil::random_poly(rng, r);
            Polynomial b = testutil::random_poly(rng, r);
            Polynomial c = testutil::random_poly(rng, r);
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a * b == b * a);
            CHECK(a + b == b + a);
        }
    }
}

TEST_CASE("canonical form round-trips through text") {
    std::mt19937 rng(7);
    PolyRing r = PolyRing::standard(3);
    for (int it = 0; it < 60; ++it) {
        Polynomial p = testutil::random_poly(rng, r, 6, 4, 9);
        CHECK(Polynomial::parse(r, p.str()) == p);
    }
    PolyRing rp = PolyRing::standard(3, 7);
    for (int it = 0; it < 30; ++it) {
        Polynomial p = testutil::random_poly(rng, rp, 6, 4, 9);
        CHECK(Polynomial::parse(rp, p.str()) == p);
    }
}

TEST_CASE("parser handles the documented grammar") {
    PolyRing r = PolyRing::standard(3);
    CHECK(P(r, "3*x1^2*x2 - x3") ==
          P(r, " 3 * x1 ^ 2 * x2  -  x3 "));
    CHECK(P(r, "1/2*x1 + 1/2*x1") == P(r, "x1"));
    CHECK(P(r, "2 - x1").str() == "-x1 + 2");  // grevlex-descending order
    CHECK_THROWS_AS(P(r, "x9"), ParseError);
    CHECK_THROWS_AS(P(r, "x1 +"), ParseError);
    CHECK_THROWS_AS(P(r, ""), ParseError);
}

TEST_CASE("degree is additive on homogeneous products") {
    std::mt19937 rng(99);
    PolyRing r = PolyRing::standard(3);
    int found = 0;
    while (found < 25) {
        Polynomial a = testutil::random_homogeneous(rng, r, 2);
        Polynomial b = testutil::random_homogeneous(rng, r, 3);
        if (a.is_zero() || b.is_zero()) continue;
        ++found;
        CHECK(*(a * b).homogeneous_degree() ==
              *a.homogeneous_degree() + *b.homogeneous_degree());
    }
}

TEST_CASE("mod-p coefficients reduce canonically") {
    PolyRing r = PolyRing::standard(2, 5);
    CHECK(P(r, "7*x1") == P(r, "2*x1"));
    CHECK((P(r, "x1") + P(r, "4*x1")).is_zero());
    CHECK(P(r, "1/2").constant_coefficient() == Scalar::from_int(5, 3));
}

TEST_CASE("divide_exact") {
    PolyRing r = R2();
    auto q = divide_exact(P(r, "x1^2 - x2^2"), P(r, "x1 - x2"));
    REQUIRE(q.has_value());
    CHECK(*q == P(r, "x1 + x2"));
    CHECK(!divide_exact(P(r, "x1^2 + x2"), P(r, "x1 - x2")).has_value());
}

TEST_CASE("scalar field inverses") {
    CHECK(Scalar::from_int(0, 3).inverse() ==
          Scalar::parse(0, "1/3"));
    Scalar a = Scalar::from_int(32003, 12345);
    CHECK(a * a.inverse() == Scalar::one(32003));
    CHECK_THROWS(Scalar::zero(7).inverse());
}

TEST_CASE("ring constructor validates") {
    CHECK_THROWS(PolyRing({"x", "x"}, 0));
    CHECK_THROWS(PolyRing({"x"}, 6));     // composite characteristic
    CHECK_THROWS(PolyRing({"x"}, 0, {0}));  // weight < 1
}
