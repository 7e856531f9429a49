#pragma once
// L(C_n, s) from the Hecke character psi_n((alpha)) = conj((n/alpha)_3) alpha,
// alpha = 1 (mod 3), via a smoothed Dirichlet series.

#include <cstdint>
#include <vector>

#include "cubicbsd/mp.hpp"

namespace cubicbsd {

struct HeckeSeries {
    long n = 0;
    std::vector<std::int64_t> coefficients;  // a_m at index m, a_0 unused
    long conductor = 0;                      // 0 until resolved
    int root_number = 0;                     // 0 until resolved

    long length() const { return static_cast<long>(coefficients.size()) - 1; }
};

// n must be 1 or 2^i p^j, i,j <= 2, p a prime > 3.
HeckeSeries hecke_coefficients(long n, long X);

// Bad primes of C_n: 3 and the primes dividing n.
std::vector<long> bad_primes(long n);

struct SymmetryOptions {
    // Lambda_A(s) must not depend on A. For a wrong conductor N the
    // A-dependence decays like exp(-T / (A T0^2)), T = sqrt(N)/(2 pi) and T0
    // the same for the true conductor, so A is scaled with the candidate:
    // a_high = max(min_a, T / (kappa Tmin^2)), a_low = a_high / ratio, Tmin
    // from the smallest grid conductor. Offsets t give s = 1 + t; integral s
    // keeps every incomplete gamma elementary.
    long double min_a = 1.4L;
    long double ratio = 2.0L;
    long double kappa = 6.0L;
    std::vector<int> offsets{0, 1, 2};
    long double tolerance = 1e-12L;
};

struct ConductorCandidate {
    long conductor;
    int root_number;
    long double mismatch;  // worst relative disagreement over the offsets
};

struct ConductorResolution {
    long conductor = 0;
    int root_number = 0;
    long double mismatch = 0;
    long double runner_up = 0;  // best mismatch among the rejected candidates
    std::vector<ConductorCandidate> passing;
};

// Grid {2^a 3^b q^2 : 0 <= a <= 8, 0 <= b <= 5}, q the prime > 3 dividing n.
std::vector<long> conductor_grid(long n);
ConductorResolution resolve_conductor(long n, const SymmetryOptions& opt = {});

struct OracleValue {
    mp::Real value;           // L(C_n, 1)
    mp::Real error_estimate;
    int root_number = 0;
    long conductor = 0;
    long terms = 0;
};

OracleValue lvalue_oracle(long n, long precision_bits);

struct ProbeResult {
    mp::Real value;  // L'(C_n, 1)
    mp::Real error_estimate;
    bool conclusive = false;  // |value| > 1000 * error_estimate
    long conductor = 0;
};

// Requires root number -1; throws DomainError otherwise.
ProbeResult lprime_probe(long n, long precision_bits = 128);

}  // namespace cubicbsd
