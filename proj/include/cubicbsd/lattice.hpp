#pragma once
// The period lattice L = Omega * Z[w] of y^2 = 4x^3 - 1 (g2 = 0, g3 = 1) and
// the Weierstrass functions on it.

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "cubicbsd/eisenstein.hpp"
#include "cubicbsd/mp.hpp"

namespace cubicbsd {

namespace detail {
struct WeierstrassKernel;
}

struct PeriodData {
    mp::Real omega;
    long precision_bits = 0;
    mp::Real a_of_L;     // sqrt(3) Omega^2 / (2 pi), the covolume over pi
    mp::Real s2_of_L;    // 2 zeta(Omega/2)/Omega - 2 pi/(sqrt(3) Omega^2)
    mp::Real zeta_half;  // zeta(Omega/2)
    std::pair<mp::Complex, mp::Complex> wp_third;  // wp(Omega/3), wp'(Omega/3)

    std::shared_ptr<const detail::WeierstrassKernel> kernel;
};

PeriodData compute_period(long precision_bits);

struct WpValue {
    mp::Complex x;  // wp(z)
    mp::Complex y;  // wp'(z)
};

// Direct evaluation: reduction to the fundamental domain, Laurent series at
// z/2, one duplication step.
WpValue weierstrass_p(const PeriodData& period, const mp::Complex& z);
mp::Complex weierstrass_zeta(const PeriodData& period, const mp::Complex& z);
mp::Complex eisenstein_e1star(const PeriodData& period, const mp::Complex& z);

// (a + b w) * Omega / m as a complex number
mp::Complex division_point(const PeriodData& period, const EisensteinInteger& c, long m);
mp::Complex division_point(const PeriodData& period, long a, long b, long m);

// |y^2 - (4x^3 - 1)|
mp::Real curve_residual(const WpValue& v);

struct WalkStats {
    mp::Real max_residual;
    mp::Real max_drift;  // largest |x_walk - x_direct| seen at a re-anchor
    long anchors = 0;
    long steps = 0;
    void merge(const WalkStats& o);
};

constexpr long kReanchorInterval = 64;

using DivisionVisitor = std::function<void(long a, long b, const WpValue& v)>;

// Visits every nonzero class a + b w, 0 <= a < m, for rows b_lo <= b <= b_hi,
// in increasing (b, a) order. Values come from the group-law walk
// P + Q0 with Q0 = wp at Omega/m, re-anchored directly every kReanchorInterval steps
// and at the end of each row.
WalkStats walk_division_rows(const PeriodData& period, long m, long b_lo, long b_hi, const DivisionVisitor& visit);

struct DivisionValueTable {
    long modulus = 0;
    std::vector<EisensteinInteger> reps;
    std::vector<WpValue> entries;  // parallel to reps
    mp::Real max_residual;
    mp::Real max_drift;

    const WpValue& at(const EisensteinInteger& c) const;
};

// Throws LatticePointError for a representative = 0 mod m and
// PrecisionExhausted when a residual exceeds 2^(-precision/2).
DivisionValueTable wp_division_values(const PeriodData& period, long m, const SymmetricResidueSystem& reps);

}  // namespace cubicbsd
