#include "cubicbsd/eisenstein.hpp"

#include <map>
#include <set>
#include <sstream>

#include "cubicbsd/errors.hpp"

namespace cubicbsd {

namespace {

// nearest integer to n/d (d > 0), ties toward -infinity
BigInt round_div(const BigInt& n, const BigInt& d) {
    // ceil((2n - d) / 2d)
    BigInt num = 2 * n - d, den = 2 * d;
    BigInt q = num / den;  // truncates toward zero
    if (num > 0 && q * den != num) ++q;
    return q;
}

int mod3(const BigInt& x) {
    int r = static_cast<int>(x % 3);
    return r < 0 ? r + 3 : r;
}

// Ireland-Rosen normalization: the associate that is = 2 (mod 3)
EisensteinInteger ir_primary(const EisensteinInteger& x) {
    return -primary_associate(x).primary;
}

}  // namespace

bool EisensteinInteger::divisible_by_lambda() const {
    // w = 1 mod (1 - w)
    return mod3(a_ + b_) == 0;
}

EisensteinInteger EisensteinInteger::unit(int k) {
    static const EisensteinInteger units[6] = {{1, 0}, {0, -1}, {-1, -1}, {-1, 0}, {0, 1}, {1, 1}};
    return units[((k % 6) + 6) % 6];
}

std::string EisensteinInteger::str() const {
    std::ostringstream os;
    os << a_ << (b_ < 0 ? "-" : "+") << (b_ < 0 ? BigInt(-b_) : b_) << "w";
    return os.str();
}

DivMod divmod(const EisensteinInteger& x, const EisensteinInteger& y) {
    if (y.is_zero()) throw DomainError("division by zero in Z[w]");
    BigInt n = y.norm();
    EisensteinInteger t = x * y.conj();
    EisensteinInteger q(round_div(t.a(), n), round_div(t.b(), n));
    return {q, x - q * y};
}

EisensteinInteger mod(const EisensteinInteger& x, const EisensteinInteger& y) { return divmod(x, y).remainder; }

EisensteinInteger exact_div(const EisensteinInteger& x, const EisensteinInteger& y) {
    auto [q, r] = divmod(x, y);
    if (!r.is_zero()) throw DomainError(y.str() + " does not divide " + x.str());
    return q;
}

EisensteinInteger gcd(EisensteinInteger x, EisensteinInteger y) {
    while (!y.is_zero()) {
        EisensteinInteger r = mod(x, y);
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

PrimaryAssociate primary_associate(const EisensteinInteger& alpha) {
    if (alpha.divisible_by_lambda())
        throw DomainError("primary associate undefined: " + alpha.str() + " is divisible by 1-w");
    for (int k = 0; k < 6; ++k) {
        EisensteinInteger u = EisensteinInteger::unit(k);
        EisensteinInteger v = u * alpha;
        if (mod3(v.a()) == 1 && mod3(v.b()) == 0) return {u, v};
    }
    throw DomainError("no primary associate for " + alpha.str());  // unreachable
}

EisensteinInteger CubicSymbol::value() const {
    if (zero) return EisensteinInteger(0, 0);
    static const EisensteinInteger vals[3] = {{1, 0}, {0, 1}, {-1, -1}};
    return vals[exponent];
}

CubicSymbol cubic_residue_symbol(const EisensteinInteger& alpha_in, const EisensteinInteger& beta_in) {
    if (beta_in.is_zero() || beta_in.divisible_by_lambda())
        throw DomainError("cubic residue symbol: lower argument " + beta_in.str() + " not coprime to 3");
    static const EisensteinInteger lambda(1, -1);
    EisensteinInteger alpha = alpha_in, beta = beta_in;
    long e = 0;
    for (;;) {
        beta = ir_primary(beta);
        if (beta.is_unit()) return {false, static_cast<int>(((e % 3) + 3) % 3)};
        alpha = mod(alpha, beta);
        if (alpha.is_zero()) return {true, 0};

        int k = 0;
        while (alpha.divisible_by_lambda()) {
            // x / (1 - w) = x (2 + w) / 3
            EisensteinInteger t = alpha * EisensteinInteger(2, 1);
            alpha = EisensteinInteger(t.a() / 3, t.b() / 3);
            ++k;
        }
        BigInt nb1 = (beta.norm() - 1) / 3;
        int m = mod3((beta.a() + 1) / 3);
        // ((1-w)/beta) = w^{2m}
        e += 2L * m * k;

        // alpha = u^{-1} alpha' with alpha' Ireland-Rosen primary and u = +-w^j
        EisensteinInteger ap = ir_primary(alpha);
        int j = -1;
        for (int t = 0; t < 6; ++t) {
            if (EisensteinInteger::unit(t) * alpha == ap) { j = t % 3; break; }
        }
        // (w/beta) = w^{(N beta - 1)/3}
        e -= static_cast<long>(j) * mod3(nb1);

        // reciprocity for coprime primaries
        alpha = beta;
        beta = ap;
    }
}

EisensteinInteger canonical_residue(const EisensteinInteger& x, const EisensteinInteger& m) {
    if (m.b() != 0 || m.a() <= 0) throw UnsupportedModulus("canonical residue needs a positive rational modulus");
    const BigInt& n = m.a();
    auto red = [&](const BigInt& v) { return v - n * round_div(v, n); };
    return {red(x.a()), red(x.b())};
}

SymmetricResidueSystem symmetric_residue_system(const EisensteinInteger& m) {
    if (m.b() != 0 || m.a() <= 0 || m.a() > BigInt(1) << 31)
        throw UnsupportedModulus("modulus must be a rational p or 2p: " + m.str());
    auto mm = static_cast<std::int64_t>(m.a());
    std::int64_t p = (mm % 2 == 0) ? mm / 2 : mm;
    if (p < 5 || p % 2 == 0 || !is_prime(static_cast<std::uint64_t>(p)))
        throw UnsupportedModulus("modulus must be p or 2p for an odd prime p != 3: " + m.str());

    // canonical coordinates lie in (-m/2, m/2]
    std::int64_t lo = -((mm - 1) / 2), hi = mm / 2;
    auto coprime = [&](std::int64_t a, std::int64_t b) {
        std::int64_t n = a * a - a * b + b * b;
        if (n % p == 0) return false;
        return mm == p || n % 2 != 0;
    };
    auto canon = [&](std::int64_t v) {
        v %= mm;
        if (v > hi) v -= mm;
        if (v < lo) v += mm;
        return v;
    };

    SymmetricResidueSystem out{m, {}};
    out.reps.reserve(static_cast<std::size_t>(mm == p ? p * p - 1 : 3 * (p * p - 1)));
    std::set<std::pair<std::int64_t, std::int64_t>> assigned;
    for (std::int64_t a = lo; a <= hi; ++a) {
        for (std::int64_t b = lo; b <= hi; ++b) {
            if (!coprime(a, b) || assigned.count({a, b})) continue;
            assigned.insert({a, b});
            out.reps.emplace_back(a, b);
            std::pair<std::int64_t, std::int64_t> neg{canon(-a), canon(-b)};
            if (neg == std::make_pair(a, b)) continue;
            assigned.insert(neg);
            out.reps.emplace_back(-a, -b);
        }
    }
    return out;
}

namespace fast {

namespace {
struct Fp2 {
    std::int64_t p;
    Zw mul(Zw x, Zw y) const {
        std::int64_t bd = (x.b * y.b) % p;
        return {((x.a * y.a - bd) % p + p) % p, ((x.a * y.b + x.b * y.a - bd) % p + 2 * p) % p};
    }
};
}  // namespace

int inert_symbol(std::int64_t a, std::int64_t b, std::int64_t p) {
    a %= p; if (a < 0) a += p;
    b %= p; if (b < 0) b += p;
    if (a == 0 && b == 0) return -1;
    Fp2 f{p};
    Zw r{1, 0}, x{a, b};
    std::int64_t e = (p * p - 1) / 3;
    while (e) {
        if (e & 1) r = f.mul(r, x);
        x = f.mul(x, x);
        e >>= 1;
    }
    if (r.a == 1 && r.b == 0) return 0;
    if (r.a == 0 && r.b == 1) return 1;
    if (r.a == p - 1 && r.b == p - 1) return 2;
    throw DomainError("inert_symbol: " + std::to_string(p) + " is not an inert prime");
}

int symbol_mod2(std::int64_t a, std::int64_t b) {
    int x = static_cast<int>(a & 1), y = static_cast<int>(b & 1);
    if (x && !y) return 0;
    if (!x && y) return 1;
    if (x && y) return 2;
    return -1;
}

}  // namespace fast

namespace {
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}
}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { comp = false; break; }
        }
        if (comp) return false;
    }
    return true;
}

}  // namespace cubicbsd
