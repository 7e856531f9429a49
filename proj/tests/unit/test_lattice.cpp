#include <doctest.h>

#include "cubicbsd/errors.hpp"
#include "cubicbsd/lattice.hpp"

using namespace cubicbsd;
using mp::Complex;
using mp::Real;

namespace {

Real tol(long prec, long slack) { return mp::pow2(-prec + slack, 64); }

Real gamma_closed_form(long prec) {
    Real one(1L, prec);
    Real g16 = mp::gamma(one / 6), g12 = mp::gamma(one / 2), g23 = mp::gamma(one * 2 / 3);
    return 2 * mp::pow(Real(4L, prec), -(one / 3)) * g16 * g12 / (3 * g23);
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("real period") {
    for (long prec : {64L, 256L, 512L}) {
        auto per = compute_period(prec);
        CHECK(per.omega > Real(3.059908, 64));
        CHECK(per.omega < Real(3.059909, 64));
        CHECK(mp::abs(per.omega - gamma_closed_form(prec + 32)) < tol(prec, 4) * per.omega);
        Real a = mp::sqrt(Real(3L, prec)) * per.omega * per.omega / (2 * mp::pi(prec));
        CHECK(mp::abs(per.a_of_L - a) < tol(prec, 8) * a);
    }
}

TEST_CASE("3-division fixture and zeta at the half period") {
    const long prec = 256;
    auto per = compute_period(prec);
    Real sqrt3 = mp::sqrt(Real(3L, prec));
    auto v = weierstrass_p(per, Complex(per.omega / 3));
    CHECK(mp::abs(v.x.re - 1) < tol(prec, 16));
    CHECK(mp::abs(v.x.im) < tol(prec, 16));
    CHECK(mp::abs(v.y.re + sqrt3) < tol(prec, 16));
    CHECK(mp::abs(per.wp_third.first.re - 1) < tol(prec, 16));
    auto z = weierstrass_zeta(per, Complex(per.omega / 2));
    Real expect = mp::pi(prec) / (sqrt3 * per.omega);
    CHECK(mp::abs(z.re - expect) < tol(prec, 16));
    CHECK(mp::abs(per.zeta_half - expect) < tol(prec, 16));
    CHECK(mp::abs(per.s2_of_L) < tol(prec, 16));
}

TEST_CASE("wp is even, lattice periodic and on the curve") {
    const long prec = 192;
    auto per = compute_period(prec);
    Complex z(Real(0.37, prec), Real(0.21, prec));
    Complex w(per.omega * Real(-0.5, prec), per.omega * mp::sqrt(Real(3L, prec)) / 2);
    auto a = weierstrass_p(per, z);
    auto b = weierstrass_p(per, -z);
    auto c = weierstrass_p(per, z + Complex(per.omega));
    auto d = weierstrass_p(per, z + w);
    CHECK((a.x - b.x).abs() < tol(prec, 24));
    CHECK((a.y + b.y).abs() < tol(prec, 24));
    CHECK((a.x - c.x).abs() < tol(prec, 24));
    CHECK((a.x - d.x).abs() < tol(prec, 24));
    CHECK(curve_residual(a) < tol(prec, 24) * a.x.abs() * a.x.abs() * a.x.abs());
}

TEST_CASE("E1* is lattice periodic") {
    const long prec = 160;
    auto per = compute_period(prec);
    Complex z(Real(0.61, prec), Real(0.13, prec));
    Complex w(per.omega * Real(-0.5, prec), per.omega * mp::sqrt(Real(3L, prec)) / 2);
    auto e0 = eisenstein_e1star(per, z);
    CHECK((eisenstein_e1star(per, z + Complex(per.omega)) - e0).abs() < tol(prec, 24));
    CHECK((eisenstein_e1star(per, z + w) - e0).abs() < tol(prec, 24));
    CHECK((eisenstein_e1star(per, -z) + e0).abs() < tol(prec, 24));
}

TEST_CASE("group-law walk stays on the direct values") {
    const long prec = 192;
    auto per = compute_period(prec);
    long visited = 0;
    Real worst(0L, prec);
    auto stats = walk_division_rows(per, 11, 0, 10, [&](long a, long b, const WpValue& v) {
        ++visited;
        if ((a + b) % 17 == 0) {
            auto d = weierstrass_p(per, division_point(per, a, b, 11));
            Real e = (d.x - v.x).abs() / (Real(1L, prec) + d.x.abs());
            if (e > worst) worst = e;
        }
    });
    CHECK(visited == 11 * 11 - 1);
    CHECK(stats.steps + stats.anchors >= visited);
    CHECK(worst < tol(prec, 40));
    CHECK(stats.max_drift < tol(prec, 40));
}

TEST_CASE("division value table") {
    const long prec = 192;
    auto per = compute_period(prec);
    auto reps = symmetric_residue_system(EisensteinInteger(5));
    auto table = wp_division_values(per, 5, reps);
    CHECK(table.entries.size() == reps.reps.size());
    CHECK(table.max_residual < tol(prec, 40));
    for (std::size_t i = 0; i < reps.reps.size(); ++i) {
        auto d = weierstrass_p(per, division_point(per, reps.reps[i], 5));
        CHECK((d.x - table.at(reps.reps[i]).x).abs() < tol(prec, 40) * (Real(1L, prec) + d.x.abs()));
    }
    SymmetricResidueSystem bad{EisensteinInteger(5), {EisensteinInteger(5, 0)}};
    CHECK_THROWS_AS(wp_division_values(per, 5, bad), LatticePointError);
}

}
