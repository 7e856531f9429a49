#pragma once
// Algebraic parts of L(C_n, 1) for n in {p, p^2, 2p, 4p, 2p^2, 4p^2} from the
// finite sums over division values of wp, and the mod-3 congruence verdicts.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cubicbsd/eisenstein.hpp"
#include "cubicbsd/lattice.hpp"
#include "cubicbsd/mp.hpp"

namespace cubicbsd {

struct AlgebraicLValue {
    long n = 0;
    long p = 0;
    mp::Complex complex_value;  // L(C_n, 1)
    mp::Real period;            // Omega_n = Omega / (sqrt(3) n^(1/3))
    BigInt algebraic_part = 0;  // L(C_n, 1) / Omega_n
    mp::Real error_bound;
    bool is_forced_zero = false;
    long precision_bits = 0;
};

// p = 2 or 5 (mod 9), p prime; anything else throws UnsupportedPrime.
void require_family_prime(long p);
bool is_family_prime(long p);

// Root-number forced zeros: 2p^2 and 4p for p = 5 (mod 9), 2p and 4p^2 for p = 2 (mod 9).
bool is_forced_zero_shape(long p, long n);

AlgebraicLValue lvalue_p_family(long p, long D, const PeriodData& period);
AlgebraicLValue lvalue_2p_family(long p, long n, const PeriodData& period);

// All six shapes from one pass over each of the two moduli.
std::map<long, AlgebraicLValue> lvalue_all_shapes(long p, const PeriodData& period);

// The unique integer within bound of x; bound must be < 1/2.
BigInt integer_recognize(const mp::Real& x, const mp::Real& bound);

// Sign of the modulus-2p closed form; checked once against the Hecke oracle at
// p = 5, n = 10 and throws ConsistencyFailure on disagreement.
void ensure_2p_normalization();

struct CongruenceCheck {
    std::string label;
    std::string claim;
    BigInt observed = 0;
    bool pass = false;
};

struct CongruenceReport {
    long p = 0;
    int residue_class_mod9 = 0;
    long precision_bits = 0;
    std::vector<CongruenceCheck> checks;
    std::map<long, BigInt> algebraic_parts;  // forced zeros recorded as 0
    double max_error_bound = 0;              // over the six shapes
    bool all_pass() const;
};

// Escalates precision on recognition failure, up to four times the start.
CongruenceReport congruence_report(long p, long precision_bits = 256);

struct IsogenyCheck {
    mp::Real max_residual;      // relative residual of phi(P) on E'_n
    mp::Real max_odd_residual;  // |phi(-P) + phi(P)| in affine coordinates, relative
};

// phi: E_n: y^2 z = x^3 - 2^4 3^3 n^2 z^3 -> E'_n: y^2 z = x^3 + 2^4 n^2 z^3
IsogenyCheck isogeny_check(long n, long samples, long precision_bits = 256, std::uint64_t seed = 1);

// Worker threads used by the finite sums; 0 means hardware concurrency.
void set_lvalue_threads(unsigned n);

}  // namespace cubicbsd
