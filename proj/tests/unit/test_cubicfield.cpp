#include <doctest.h>

#include <cmath>
#include <random>

#include "cubicbsd/cubicfield.hpp"
#include "cubicbsd/errors.hpp"

using namespace cubicbsd;

namespace {

std::vector<long> divisors_of(const ClassGroupStructure& cg) {
    std::vector<long> v;
    for (const auto& d : cg.elementary_divisors) v.push_back(d.convert_to<long>());
    return v;
}

}  // namespace

TEST_SUITE("cubicfield") {

TEST_CASE("order and arithmetic") {
    auto o = integral_basis(5);
    CHECK(o.discriminant == -27 * 25);
    CHECK(integral_basis(2).discriminant == -108);
    CHECK_THROWS_AS(integral_basis(7), UnsupportedPrime);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int i = 0; i < 100; ++i) {
        CubicElement x{d(rng), d(rng), d(rng)}, y{d(rng), d(rng), d(rng)};
        CHECK(norm(multiply(x, y, 11), 11) == norm(x, 11) * norm(y, 11));
    }
    CubicElement t{0, 1, 0};
    CHECK(norm(t, 11) == 11);
    auto t3 = multiply(multiply(t, t, 11), t, 11);
    CHECK((t3.a == 11 && t3.b == 0 && t3.c == 0));
    CHECK(std::abs(real_embedding(t, 11, 64).to_double() - std::cbrt(11.0)) < 1e-14);
}

TEST_CASE("prime ideal splitting") {
    CHECK(cube_roots_mod(8, 13).size() == 3);
    CHECK(cube_roots_mod(2, 7).empty());
    CHECK(cube_roots_mod(3, 5).size() == 1);
    for (long p : {5L, 11L, 113L})
        for (long q : {2L, 3L, 5L, 7L, 11L, 13L, 19L, 31L, 37L, 113L}) {
            auto ps = primes_above(p, q);
            int f = 0;
            for (const auto& P : ps) {
                f += P.degree;
                if (P.degree == 1 && q != p && q != 3) {
                    long r = P.root;
                    CHECK((r * r % q) * r % q == p % q);
                }
            }
            if (q == p || q == 3)
                CHECK((ps.size() == 1 && ps[0].degree == 1));
            else
                CHECK(f == 3);
        }
}

TEST_CASE("bounds and analytic class number") {
    CHECK(minkowski_bound(113) == doctest::Approx(8 * std::sqrt(3.0) * 113 / (3 * M_PI)));
    CHECK(bach_bound(10007) > 0);
    for (long p : {5L, 113L, 3209L})
        CHECK(artin_l1(p) == doctest::Approx(artin_l1_euler(p)).epsilon(0.01));
}

TEST_CASE("fundamental units of the classical fixtures") {
    auto u2 = fundamental_unit(2);
    CHECK(u2.certified);
    CHECK((u2.unit.a == 1 && u2.unit.b == 1 && u2.unit.c == 1));
    auto u5 = fundamental_unit(5);
    CHECK(u5.certified);
    CHECK((u5.unit.a == 41 && u5.unit.b == 24 && u5.unit.c == 14));
    CHECK(norm(u5.unit, 5) == 1);
}

TEST_CASE("appendix class groups") {
    struct Row {
        long p;
        std::vector<long> cl;
        Certificate cert;
    };
    std::vector<Row> rows{{113, {2, 2}, Certificate::ProvedByEnumeration},
                          {443, {2, 2}, Certificate::ProvedByEnumeration},
                          {857, {2, 28}, Certificate::ProvedByEnumeration},
                          {3209, {2, 68}, Certificate::GrhAnalytic},
                          {4799, {2, 2, 20}, Certificate::GrhAnalytic}};
    for (const auto& r : rows) {
        auto cg = class_group(r.p);
        CHECK(divisors_of(cg) == r.cl);
        CHECK(cg.certificate == r.cert);
        CHECK(cg.relations_verified == cg.relations);
        CHECK(cg.ratio == doctest::Approx(1.0).epsilon(0.01));
    }
    CHECK(class_group(5).class_number == 1);
    CHECK(class_group(11).class_number == 2);
}

TEST_CASE("every relation verifies independently") {
    for (long p : {59L, 113L, 857L, 3209L}) {
        auto cg = class_group(p);
        CHECK(cg.relations > 0);
        CHECK(cg.relations_verified == cg.relations);
    }
}

TEST_CASE("two-rank does not depend on the sampling seed") {
    for (long p : {113L, 443L, 587L, 857L, 983L}) {
        auto base = class_group(p);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            ClassGroupOptions o;
            o.seed = seed;
            auto cg = class_group(p, o);
            CHECK(cg.two_rank == base.two_rank);
            CHECK(cg.class_number == base.class_number);
        }
    }
}

TEST_CASE("proved and grh paths agree below the proved limit") {
    for (long p : {113L, 443L, 857L, 1373L, 1993L}) {
        if (!is_prime(p) || (p % 9 != 2 && p % 9 != 5)) continue;
        ClassGroupOptions o;
        o.force_grh = true;
        auto g = class_group(p, o);
        auto e = class_group(p);
        CHECK(g.certificate == Certificate::GrhAnalytic);
        CHECK(e.certificate == Certificate::ProvedByEnumeration);
        CHECK(divisors_of(g) == divisors_of(e));
    }
}

TEST_CASE("string forms") {
    CHECK(to_string(Certificate::ProvedByEnumeration) == "proved-by-enumeration");
    CHECK(certificate_from_string("grh-analytic") == Certificate::GrhAnalytic);
    CHECK(effort_from_string("high") == Effort::High);
    CHECK_THROWS(effort_from_string("huge"));
    CHECK_THROWS_AS(class_group(7), UnsupportedPrime);
}

}
