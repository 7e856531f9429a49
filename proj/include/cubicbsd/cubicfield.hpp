#pragma once
// L = Q(t), t^3 = p, p = 2 or 5 (mod 9): ring of integers Z[t], prime ideals,
// relations, class group and fundamental unit.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cubicbsd/eisenstein.hpp"
#include "cubicbsd/mp.hpp"

namespace cubicbsd {

struct PureCubicOrder {
    long p = 0;
    BigInt discriminant = 0;  // -27 p^2
    // basis (1, t, t^2)
};

// p prime, p = 2 or 5 (mod 9). p = 2 is accepted (Z[cbrt 2] is maximal) so the
// classical cbrt(2) fixture can run through the same code.
PureCubicOrder integral_basis(long p);

// a + b t + c t^2
struct CubicElement {
    BigInt a = 0, b = 0, c = 0;
};

CubicElement multiply(const CubicElement& x, const CubicElement& y, long p);
BigInt norm(const CubicElement& x, long p);
// real embedding t -> p^(1/3)
mp::Real real_embedding(const CubicElement& x, long p, long prec);

struct PrimeIdeal {
    long q = 0;       // rational prime below
    int degree = 0;   // residue degree f, norm q^f
    long root = -1;   // t = root (mod P) for degree 1 above q not dividing 3p
    std::string str() const;
    long norm() const;
};

// All prime ideals above q.
std::vector<PrimeIdeal> primes_above(long p, long q);

// Number of roots of x^3 - a in F_q (q prime), and the roots themselves.
std::vector<long> cube_roots_mod(long a, long q);

enum class Certificate { ProvedByEnumeration, GrhAnalytic };
std::string to_string(Certificate c);
Certificate certificate_from_string(const std::string& s);

enum class Effort { Low, Default, High };
Effort effort_from_string(const std::string& s);
std::string to_string(Effort e);

struct Relation {
    CubicElement element;
    std::vector<std::pair<int, int>> exponents;  // (factor-base index, valuation)
};

struct ClassGroupStructure {
    long p = 0;
    std::vector<BigInt> elementary_divisors;  // d1 | d2 | ..., all > 1
    int two_rank = 0;
    Certificate certificate = Certificate::GrhAnalytic;

    BigInt class_number = 1;
    double regulator = 0;
    double analytic_hR = 0;  // sqrt|d| L(1, rho) / (2 pi)
    double ratio = 0;        // h R / analytic_hR
    double l1_rho = 0;       // L(1, rho) from the functional equation
    double l1_rho_euler = 0; // truncated Euler product, cross-check only
    long factor_base_bound = 0;
    long factor_base_size = 0;
    long relations = 0;
    long relations_verified = 0;
    std::uint64_t seed = 0;
    int rounds = 0;
};

struct ClassGroupOptions {
    Effort effort = Effort::Default;
    std::uint64_t seed = 0x5eed;
    // Minkowski factor base and proved certificate when p <= this bound,
    // Bach-bound factor base and grh-analytic above it.
    long proved_limit = 2000;
    bool force_grh = false;     // Bach factor base even for small p
    long tag_precision = 160;   // bits carried for unit logarithms
};

ClassGroupStructure class_group(long p, const ClassGroupOptions& opt = {});
ClassGroupStructure class_group(long p, Effort effort);

double minkowski_bound(long p);
double bach_bound(long p);

// L(1, rho) = zeta_L(1)/zeta(1) residue ratio from the smoothed functional
// equation (conductor 27 p^2, root number +1) and from an Euler product.
double artin_l1(long p);
double artin_l1_euler(long p, long X = 100000);

struct FundamentalUnit {
    CubicElement unit;       // u > 1 in the real embedding
    mp::Real log_unit;       // regulator
    bool certified = false;  // norm 1 and no k-th root, k up to the Artin bound
    std::string note;
};

FundamentalUnit fundamental_unit(long p, const ClassGroupOptions& opt = {});

// Verify a relation: norm identity plus independent valuation checks.
bool verify_relation(long p, const std::vector<PrimeIdeal>& fb, const Relation& r);

}  // namespace cubicbsd
