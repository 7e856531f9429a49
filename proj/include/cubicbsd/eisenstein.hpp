#pragma once
// Exact arithmetic in Z[w], w = (-1 + sqrt(-3))/2, w^2 = -1 - w.

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cubicbsd {

using BigInt = boost::multiprecision::cpp_int;

class EisensteinInteger {
public:
    EisensteinInteger() = default;
    EisensteinInteger(BigInt a, BigInt b = 0) : a_(std::move(a)), b_(std::move(b)) {}
    template <std::integral T, std::integral U = int>
    EisensteinInteger(T a, U b = 0) : a_(a), b_(b) {}

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }

    BigInt norm() const { return a_ * a_ - a_ * b_ + b_ * b_; }
    EisensteinInteger conj() const { return {a_ - b_, -b_}; }  // w -> w^2 = -1 - w
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_unit() const { return norm() == 1; }
    bool divisible_by_lambda() const;  // lambda = 1 - w, the prime above 3

    static EisensteinInteger omega() { return {0, 1}; }
    // (-w)^k runs through all six units
    static EisensteinInteger unit(int k);

    friend EisensteinInteger operator+(const EisensteinInteger& x, const EisensteinInteger& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
    friend EisensteinInteger operator-(const EisensteinInteger& x, const EisensteinInteger& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
    friend EisensteinInteger operator-(const EisensteinInteger& x) { return {-x.a_, -x.b_}; }
    friend EisensteinInteger operator*(const EisensteinInteger& x, const EisensteinInteger& y) {
        BigInt bd = x.b_ * y.b_;
        return {x.a_ * y.a_ - bd, x.a_ * y.b_ + x.b_ * y.a_ - bd};
    }
    friend bool operator==(const EisensteinInteger& x, const EisensteinInteger& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const EisensteinInteger& x, const EisensteinInteger& y) { return !(x == y); }
    friend bool operator<(const EisensteinInteger& x, const EisensteinInteger& y) {
        return x.a_ < y.a_ || (x.a_ == y.a_ && x.b_ < y.b_);
    }

    std::string str() const;

private:
    BigInt a_{0}, b_{0};
};

struct DivMod {
    EisensteinInteger quotient, remainder;
};

// x = q*y + r with norm(r) < norm(y); rounding to nearest, ties toward -infinity.
DivMod divmod(const EisensteinInteger& x, const EisensteinInteger& y);
EisensteinInteger mod(const EisensteinInteger& x, const EisensteinInteger& y);
// exact division; throws DomainError when y does not divide x
EisensteinInteger exact_div(const EisensteinInteger& x, const EisensteinInteger& y);
EisensteinInteger gcd(EisensteinInteger x, EisensteinInteger y);

struct PrimaryAssociate {
    EisensteinInteger unit;
    EisensteinInteger primary;
};

// unit * alpha == primary, primary = 1 (mod 3)
PrimaryAssociate primary_associate(const EisensteinInteger& alpha);

// Value of a cubic residue symbol: 0 or w^exponent.
struct CubicSymbol {
    bool zero = false;
    int exponent = 0;  // 0, 1, 2
    EisensteinInteger value() const;
    friend bool operator==(const CubicSymbol& x, const CubicSymbol& y) {
        return x.zero == y.zero && (x.zero || x.exponent == y.exponent);
    }
};

CubicSymbol cubic_residue_symbol(const EisensteinInteger& alpha, const EisensteinInteger& beta);

struct SymmetricResidueSystem {
    EisensteinInteger modulus;
    std::vector<EisensteinInteger> reps;
};

// Canonical representative of x modulo the rational integer m:
// coordinates reduced to nearest, ties toward -infinity, i.e. into (-m/2, m/2].
EisensteinInteger canonical_residue(const EisensteinInteger& x, const EisensteinInteger& m);

// m = p or 2p with p an odd rational prime, p != 3.
SymmetricResidueSystem symmetric_residue_system(const EisensteinInteger& m);

// Fast paths on machine words, used by the L-value kernels.
namespace fast {

struct Zw {
    std::int64_t a, b;
};

// (c/p)_3 for a rational prime p = 2 (mod 3), c given modulo p; -1 when p | c
int inert_symbol(std::int64_t a, std::int64_t b, std::int64_t p);
// (c/2)_3 read off c mod 2; -1 when 2 | c
int symbol_mod2(std::int64_t a, std::int64_t b);

}  // namespace fast

bool is_prime(std::uint64_t n);

}  // namespace cubicbsd
