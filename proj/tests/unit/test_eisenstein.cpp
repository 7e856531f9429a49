#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cubicbsd/eisenstein.hpp"
#include "cubicbsd/errors.hpp"

using namespace cubicbsd;

namespace {

using E = EisensteinInteger;

E power_mod(E x, BigInt e, const E& m) {
    E r(1);
    x = mod(x, m);
    while (e > 0) {
        if ((e & 1) != 0) r = mod(r * x, m);
        x = mod(x * x, m);
        e >>= 1;
    }
    return r;
}

// A primary prime of prime norm q = 1 (mod 3): search a + b w with a^2 - ab + b^2 = q.
E split_prime(long q) {
    for (long b = 1; b * b <= 4 * q; ++b)
        for (long a = -2 * q; a <= 2 * q; ++a)
            if (a * a - a * b + b * b == q) return primary_associate(E(a, b)).primary;
    throw std::logic_error("no prime above q");
}

// Euler criterion: (alpha/pi)_3 = alpha^((N pi - 1)/3) mod pi.
CubicSymbol symbol_by_powering(const E& alpha, const E& pi) {
    CubicSymbol s;
    if (mod(alpha, pi).is_zero()) {
        s.zero = true;
        return s;
    }
    E r = power_mod(alpha, (pi.norm() - 1) / 3, pi);
    for (int k = 0; k < 3; ++k) {
        E w = CubicSymbol{false, k}.value();
        if (mod(r - w, pi).is_zero()) {
            s.exponent = k;
            return s;
        }
    }
    throw std::logic_error("power is not a cube root of unity");
}

}  // namespace

TEST_SUITE("eisenstein") {

TEST_CASE("ring arithmetic") {
    E w = E::omega();
    CHECK(w * w == E(-1, -1));
    CHECK(w * w * w == E(1));
    CHECK(E(3, 1).norm() == 7);
    CHECK((E(2, 5) * E(-1, 3)).norm() == E(2, 5).norm() * E(-1, 3).norm());
    CHECK(E(1, -1).divisible_by_lambda());
    CHECK_FALSE(E(1, 0).divisible_by_lambda());
    for (int k = 0; k < 6; ++k) CHECK(E::unit(k).is_unit());
}

TEST_CASE("division with remainder shrinks the norm") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-1000, 1000);
    for (int i = 0; i < 500; ++i) {
        E x(d(rng), d(rng)), y(d(rng), d(rng));
        if (y.is_zero()) continue;
        auto qr = divmod(x, y);
        CHECK(qr.quotient * y + qr.remainder == x);
        CHECK(qr.remainder.norm() < y.norm());
    }
}

TEST_CASE("gcd and exact division") {
    E a(5, 2), b(7, -3), c(4, 9);
    E g = gcd(a * c, b * c);
    CHECK(mod(a * c, g).is_zero());
    CHECK(mod(b * c, g).is_zero());
    CHECK(g.norm() % c.norm() == 0);
    CHECK(exact_div(a * c, c) == a);
    CHECK_THROWS_AS(exact_div(a, E(2)), DomainError);
}

TEST_CASE("primary associates") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-300, 300);
    for (int i = 0; i < 200; ++i) {
        E x(d(rng), d(rng));
        if (x.is_zero() || x.divisible_by_lambda()) continue;
        auto pa = primary_associate(x);
        CHECK(pa.unit.is_unit());
        CHECK(pa.unit * x == pa.primary);
        CHECK(mod(pa.primary - E(1), E(3)).is_zero());
    }
}

TEST_CASE("cubic symbol agrees with Euler powering on 200 cases") {
    std::vector<long> split{7, 13, 19, 31, 37, 43, 61, 67, 73, 79, 97, 103, 109, 127, 139, 151};
    std::vector<long> inert{5, 11, 17, 23, 29, 41, 47, 53};
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> d(-500, 500);
    int cases = 0, agree = 0;
    while (cases < 200) {
        E pi = cases % 3 == 2 ? primary_associate(E(inert[rng() % inert.size()])).primary
                              : split_prime(split[rng() % split.size()]);
        E alpha(d(rng), d(rng));
        auto expect = symbol_by_powering(alpha, pi);
        auto got = cubic_residue_symbol(alpha, pi);
        ++cases;
        if (got == expect) ++agree;
    }
    CHECK(agree == 200);
}

TEST_CASE("cubic reciprocity for primary primes") {
    std::vector<long> qs{7, 13, 19, 31, 37, 43};
    for (long q1 : qs)
        for (long q2 : qs) {
            if (q1 == q2) continue;
            E p1 = split_prime(q1), p2 = split_prime(q2);
            CHECK(cubic_residue_symbol(p1, p2) == cubic_residue_symbol(p2, p1));
        }
}

TEST_CASE("fast inert symbol matches the exact symbol") {
    for (long p : {5L, 11L, 23L, 29L}) {
        E pe(p);
        for (long a = 0; a < p; ++a)
            for (long b = 0; b < p; ++b) {
                int f = fast::inert_symbol(a, b, p);
                auto s = cubic_residue_symbol(E(a, b), pe);
                if (s.zero)
                    CHECK(f == -1);
                else
                    CHECK(f == s.exponent);
            }
    }
}

TEST_CASE("symmetric residue systems") {
    for (long m : {5L, 10L, 22L}) {
        auto sys = symmetric_residue_system(E(m));
        long p = m % 2 == 0 ? m / 2 : m;
        CHECK(static_cast<long>(sys.reps.size()) == (m == p ? p * p - 1 : 3 * (p * p - 1)));
        std::set<E> seen;
        for (const auto& r : sys.reps) {
            CHECK(seen.insert(canonical_residue(r, E(m))).second);
            CHECK(std::find(sys.reps.begin(), sys.reps.end(), -r) != sys.reps.end());
        }
    }
    CHECK(canonical_residue(E(7, -8), E(5)) == E(2, 2));
    CHECK(is_prime(491));
    CHECK_FALSE(is_prime(493));
}

}
