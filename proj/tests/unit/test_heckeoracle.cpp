#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cubicbsd/eisenstein.hpp"
#include "cubicbsd/errors.hpp"
#include "cubicbsd/heckeoracle.hpp"

using namespace cubicbsd;
using mp::Real;

TEST_SUITE("heckeoracle") {

TEST_CASE("coefficients are multiplicative and obey Hasse") {
    auto s = hecke_coefficients(10, 3000);
    const auto& a = s.coefficients;
    CHECK(a[1] == 1);
    for (long m = 2; m <= 54; ++m)
        for (long k = 2; k <= 54; ++k)
            if (std::gcd(m, k) == 1) CHECK(a[m * k] == a[m] * a[k]);
    for (long q = 5; q <= 3000; ++q) {
        if (!is_prime(q) || 10 % q == 0) continue;
        CHECK(std::abs(static_cast<double>(a[q])) <= 2 * std::sqrt(static_cast<double>(q)));
        if (q % 3 == 2) CHECK(a[q] == 0);  // supersingular
    }
}

TEST_CASE("bad primes") {
    CHECK(bad_primes(10) == std::vector<long>{2, 3, 5});
    CHECK(bad_primes(121) == std::vector<long>{3, 11});
    CHECK_THROWS(hecke_coefficients(7 * 11, 10));
}

TEST_CASE("conductor resolution") {
    auto r = resolve_conductor(10);
    CHECK(r.conductor == 2700);
    CHECK(r.root_number == 1);
    CHECK(r.mismatch < 1e-12L);
    CHECK(r.runner_up > 100 * r.mismatch);
    auto z = resolve_conductor(50);
    CHECK(z.root_number == -1);
    auto g = conductor_grid(10);
    CHECK(g.size() == 9 * 6);
}

TEST_CASE("central derivative for a rank-one member") {
    auto pr = lprime_probe(10 * 5, 128);
    CHECK(pr.conclusive);
    CHECK(mp::abs(pr.value) > 1000 * pr.error_estimate);
    CHECK_THROWS_AS(lprime_probe(10, 128), DomainError);
}

}
