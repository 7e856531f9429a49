#include <doctest.h>

#include "cubicbsd/errors.hpp"
#include "cubicbsd/heckeoracle.hpp"
#include "cubicbsd/lvalue.hpp"

using namespace cubicbsd;
using mp::Real;

TEST_SUITE("lvalue") {

TEST_CASE("family membership") {
    CHECK(is_family_prime(5));
    CHECK(is_family_prime(11));
    CHECK_FALSE(is_family_prime(7));
    CHECK_FALSE(is_family_prime(2));
    CHECK_FALSE(is_family_prime(25));
    CHECK_THROWS_AS(require_family_prime(13), UnsupportedPrime);
    CHECK(is_forced_zero_shape(5, 50));
    CHECK(is_forced_zero_shape(5, 20));
    CHECK(is_forced_zero_shape(11, 22));
    CHECK(is_forced_zero_shape(11, 484));
    CHECK_FALSE(is_forced_zero_shape(5, 10));
}

TEST_CASE("integer recognition refuses ambiguous input") {
    Real b(1e-10, 128);
    CHECK(integer_recognize(Real(7.0 + 1e-12, 128), b) == 7);
    CHECK(integer_recognize(Real(-3.0 - 1e-12, 128), b) == -3);
    CHECK_THROWS_AS(integer_recognize(Real(2.4, 128), b), RecognitionFailure);
}

// Values obtained from the Hecke-series oracle, then frozen.
TEST_CASE("algebraic parts for p = 5 and 11") {
    auto per = compute_period(256);
    auto v5 = lvalue_all_shapes(5, per);
    CHECK(v5.at(5).algebraic_part == 1);
    CHECK(v5.at(25).algebraic_part == 2);
    CHECK(v5.at(10).algebraic_part == 3);
    CHECK(v5.at(100).algebraic_part == 3);
    CHECK(v5.at(50).algebraic_part == 0);
    CHECK(v5.at(20).algebraic_part == 0);
    auto v11 = lvalue_all_shapes(11, per);
    CHECK(v11.at(11).algebraic_part == 2);
    CHECK(v11.at(121).algebraic_part == 1);
    CHECK(v11.at(44).algebraic_part == 3);
    CHECK(v11.at(242).algebraic_part == 12);
    CHECK(v11.at(22).algebraic_part == 0);
    CHECK(v11.at(484).algebraic_part == 0);
    for (const auto& [n, v] : v11) {
        CHECK(v.error_bound < Real(1e-6, 64));
        CHECK(v.n == n);
    }
}

TEST_CASE("single-shape entry points agree with the batch") {
    auto per = compute_period(256);
    auto all = lvalue_all_shapes(23, per);
    CHECK(lvalue_p_family(23, 23, per).algebraic_part == all.at(23).algebraic_part);
    CHECK(lvalue_p_family(23, 529, per).algebraic_part == all.at(529).algebraic_part);
    CHECK(lvalue_2p_family(23, 46, per).algebraic_part == all.at(46).algebraic_part);
    CHECK(lvalue_2p_family(23, 2116, per).algebraic_part == all.at(2116).algebraic_part);
    CHECK_THROWS_AS(lvalue_p_family(23, 46, per), DomainError);
}

TEST_CASE("finite sums match the oracle for p = 5") {
    auto per = compute_period(192);
    for (const auto& [n, v] : lvalue_all_shapes(5, per)) {
        auto o = lvalue_oracle(n, 128);
        Real diff = mp::abs(o.value - v.complex_value.re);
        if (v.is_forced_zero)
            CHECK(diff < Real(1e-8, 64));
        else
            CHECK(diff < mp::abs(o.value) * Real(1e-8, 64));
    }
}

TEST_CASE("congruence report verdicts") {
    for (long p : {5L, 11L, 23L, 29L}) {
        auto r = congruence_report(p, 256);
        CHECK(r.all_pass());
        CHECK(r.residue_class_mod9 == p % 9);
        CHECK(r.checks.size() == 8);
    }
}

TEST_CASE("isogeny residuals") {
    auto c = isogeny_check(10, 8, 256, 3);
    CHECK(c.max_residual < mp::pow2(-128, 64));
    CHECK(c.max_odd_residual < mp::pow2(-128, 64));
}

}
