#include "cubicbsd/cubicfield.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

#include "cubicbsd/errors.hpp"

namespace cubicbsd {

using Z = boost::multiprecision::mpz_int;

namespace {

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
    __int128 r = 1 % m, x = ((a % m) + m) % m;
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t g = m, x = 0, y = 1, aa = ((a % m) + m) % m;
    // invariant: g = x*a (mod m), aa = y*a (mod m)
    while (aa) {
        std::int64_t q = g / aa;
        std::tie(g, aa) = std::make_pair(aa, g - q * aa);
        std::tie(x, y) = std::make_pair(y, x - q * y);
    }
    if (g != 1) throw DomainError("not invertible");
    return ((x % m) + m) % m;
}

std::vector<long> primes_upto(long n) {
    std::vector<char> comp(static_cast<std::size_t>(n + 1), 0);
    std::vector<long> out;
    for (long i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

BigInt to_big(const Z& x) { return BigInt(x.str()); }

void check_family_like(long p) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
        throw UnsupportedPrime("p = " + std::to_string(p) + " is not prime");
    if (p % 9 != 2 && p % 9 != 5)
        throw UnsupportedPrime("p = " + std::to_string(p) + " is not 2 or 5 mod 9");
}

}  // namespace

PureCubicOrder integral_basis(long p) {
    check_family_like(p);
    PureCubicOrder o;
    o.p = p;
    o.discriminant = BigInt(-27) * p * p;
    return o;
}

CubicElement multiply(const CubicElement& x, const CubicElement& y, long p) {
    CubicElement r;
    r.a = x.a * y.a + p * (x.b * y.c + x.c * y.b);
    r.b = x.a * y.b + x.b * y.a + p * x.c * y.c;
    r.c = x.a * y.c + x.b * y.b + x.c * y.a;
    return r;
}

BigInt norm(const CubicElement& x, long p) {
    BigInt P = p;
    return x.a * x.a * x.a + P * x.b * x.b * x.b + P * P * x.c * x.c * x.c - 3 * P * x.a * x.b * x.c;
}

mp::Real real_embedding(const CubicElement& x, long p, long prec) {
    long extra = 3 * static_cast<long>(msb(abs(x.a) + abs(x.b) * p + abs(x.c) * p + 1)) + 32;
    long wp = prec + extra;
    mp::Real t = mp::cbrt(mp::Real(p, wp));
    auto big = [&](const BigInt& v) { return mp::Real(v.str(), wp); };
    mp::Real r = big(x.a) + big(x.b) * t + big(x.c) * t * t;
    return r.at(prec);
}

std::string PrimeIdeal::str() const {
    std::string s = "P(" + std::to_string(q);
    if (degree == 1 && root >= 0) s += ",t-" + std::to_string(root);
    else s += ",f=" + std::to_string(degree);
    return s + ")";
}

long PrimeIdeal::norm() const {
    long n = 1;
    for (int i = 0; i < degree; ++i) n *= q;
    return n;
}

std::vector<long> cube_roots_mod(long a, long q) {
    long am = ((a % q) + q) % q;
    std::vector<long> roots;
    if (am == 0) return {0};
    if (q % 3 == 2 || q == 3) {
        // cubing is a bijection
        if (q == 3) return {am};
        if (q == 2) return {am};
        return {static_cast<long>(powmod(am, (2 * q - 1) / 3, q))};
    }
    if (powmod(am, (q - 1) / 3, q) != 1) return {};
    long r0 = -1;
    for (long x = 1; x < q; ++x) {
        if (static_cast<__int128>(x) * x % q * x % q == am) { r0 = x; break; }
    }
    long z = 1;
    for (long g = 2; g < q; ++g) {
        z = static_cast<long>(powmod(g, (q - 1) / 3, q));
        if (z != 1) break;
    }
    roots = {r0, static_cast<long>(static_cast<__int128>(r0) * z % q),
             static_cast<long>(static_cast<__int128>(r0) * z % q * z % q)};
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<PrimeIdeal> primes_above(long p, long q) {
    if (q == p) return {{q, 1, 0}};
    if (q == 3) return {{3, 1, ((p % 3) + 3) % 3}};
    auto roots = cube_roots_mod(p, q);
    if (q % 3 == 2) return {{q, 1, roots[0]}, {q, 2, -1}};
    if (roots.size() == 3) return {{q, 1, roots[0]}, {q, 1, roots[1]}, {q, 1, roots[2]}};
    return {{q, 3, -1}};
}

std::string to_string(Certificate c) {
    return c == Certificate::ProvedByEnumeration ? "proved-by-enumeration" : "grh-analytic";
}

Certificate certificate_from_string(const std::string& s) {
    if (s == "proved-by-enumeration") return Certificate::ProvedByEnumeration;
    if (s == "grh-analytic") return Certificate::GrhAnalytic;
    throw ParseError("unknown certificate '" + s + "'", 0);
}

Effort effort_from_string(const std::string& s) {
    if (s == "low") return Effort::Low;
    if (s == "default") return Effort::Default;
    if (s == "high") return Effort::High;
    throw ConfigurationError("unknown effort '" + s + "'");
}

std::string to_string(Effort e) {
    switch (e) {
        case Effort::Low: return "low";
        case Effort::High: return "high";
        default: return "default";
    }
}

double minkowski_bound(long p) { return 8.0 * std::sqrt(3.0) * static_cast<double>(p) / (3.0 * M_PI); }

double bach_bound(long p) {
    double ld = std::log(27.0 * static_cast<double>(p) * static_cast<double>(p));
    return 12.0 * ld * ld;
}

// ---------------------------------------------------------------------------
// L(1, rho), rho the 2-dimensional representation: zeta_L = zeta * L(s, rho).

namespace {

// local coefficient a(q^k) of L(s, rho)
int rho_prime_power(int type, int k) {
    switch (type) {
        case 0: return 0;                        // ramified
        case 1: return k + 1;                    // split completely
        case 2: return k % 3 == 0 ? 1 : (k % 3 == 1 ? -1 : 0);  // inert
        default: return k % 2 == 0 ? 1 : 0;      // q = 2 (mod 3)
    }
}

int split_type(long p, long q) {
    if (q == 3 || q == p) return 0;
    if (q % 3 == 2) return 3;
    return powmod(p % q, (q - 1) / 3, q) == 1 ? 1 : 2;
}

}  // namespace

double artin_l1(long p) {
    check_family_like(p);
    const long double T = std::sqrt(27.0L) * p / (2.0L * static_cast<long double>(M_PI));
    const long double xmax = 36.0L;
    const long N = static_cast<long>(xmax * T) + 2;
    std::vector<std::int16_t> a(static_cast<std::size_t>(N + 1), 1);
    std::vector<char> comp(static_cast<std::size_t>(N + 1), 0);
    for (long q = 2; q <= N; ++q) {
        if (comp[q]) continue;
        for (long j = q * q; j <= N; j += q) comp[j] = 1;
        int type = split_type(p, q);
        long Q = q;
        for (int k = 1;; ++k) {
            int f = rho_prime_power(type, k);
            for (long m = Q; m <= N; m += Q) {
                if (Q <= N / q && m % (Q * q) == 0) continue;
                a[m] = static_cast<std::int16_t>(a[m] * f);
            }
            if (Q > N / q) break;
            Q *= q;
        }
    }
    long double lam = 0;
    for (long n = 1; n <= N; ++n) {
        if (a[n] == 0) continue;
        long double x = n / T;
        long double e = std::exp(-x);
        lam += a[n] * (e / x + boost::math::expint(1, x));
    }
    return static_cast<double>(lam / T);
}

double artin_l1_euler(long p, long X) {
    check_family_like(p);
    long double prod = 1;
    for (long q : primes_upto(X)) {
        long double u = 1.0L / q;
        switch (split_type(p, q)) {
            case 1: prod /= (1 - u) * (1 - u); break;
            case 2: prod /= 1 + u + u * u; break;
            case 3: prod /= 1 - u * u; break;
            default: break;
        }
    }
    return static_cast<double>(prod);
}

// ---------------------------------------------------------------------------
// Relations.

namespace {

struct FactorBase {
    long p = 0;
    long bound = 0;
    std::vector<PrimeIdeal> ideals;
    std::vector<long> primes;  // rational primes with at least one ideal in the base
    // per rational prime: indices of its ideals in the base, -1 when absent
    struct Above {
        int kind = 0;  // 0 ramified, 1 split, 2 inert, 3 q = 2 (mod 3)
        std::vector<int> idx;
        std::vector<long> roots;
    };
    std::unordered_map<long, Above> above;
};

FactorBase make_factor_base(long p, long bound) {
    FactorBase fb;
    fb.p = p;
    fb.bound = bound;
    for (long q : primes_upto(std::max(bound, 2L))) {
        FactorBase::Above ab;
        ab.kind = split_type(p, q);
        if (ab.kind == 1) ab.kind = 1;
        bool any = false;
        for (const auto& P : primes_above(p, q)) {
            if (P.norm() <= bound) {
                ab.idx.push_back(static_cast<int>(fb.ideals.size()));
                fb.ideals.push_back(P);
                any = true;
            } else {
                ab.idx.push_back(-1);
            }
            ab.roots.push_back(P.root);
        }
        if (any) {
            fb.primes.push_back(q);
            fb.above.emplace(q, std::move(ab));
        }
    }
    return fb;
}

// v_P(a + b t + c t^2) for the degree-one prime P = (q, t - r), q not dividing 3p,
// through the q-adic root of x^3 - p lifting r; vmax bounds the answer.
int hensel_valuation(long p, long q, long r, const Z& a, const Z& b, const Z& c, int vmax) {
    Z R = r, qk = q;
    std::int64_t inv = inv_mod((3 * static_cast<__int128>(r) * r) % q, q);
    for (int k = 1; k <= vmax; ++k) {
        Z f = (R * R * R - p) / qk;
        Z fm = f % q;
        if (fm < 0) fm += q;
        std::int64_t t = static_cast<std::int64_t>((static_cast<__int128>(q - fm.convert_to<long>()) % q) * inv % q);
        R += t * qk;
        qk *= q;
    }
    Z v = (a + b * R + c * R * R) % qk;
    int val = 0;
    while (val < vmax && v % q == 0) {
        if (v == 0) return vmax;
        v /= q;
        ++val;
    }
    return val;
}

struct Candidate {
    std::int64_t a, b, c;
};

bool factor_candidate(const FactorBase& fb, const Candidate& x, Relation& out) {
    const long p = fb.p;
    __int128 A = x.a, B = x.b, C = x.c, P = p;
    __int128 N = A * A * A + P * B * B * B + P * P * C * C * C - 3 * P * A * B * C;
    if (N == 0) return false;
    unsigned __int128 n = N < 0 ? static_cast<unsigned __int128>(-N) : static_cast<unsigned __int128>(N);
    std::vector<std::pair<long, int>> fac;
    if (n >> 64) {
        for (long q : fb.primes) {
            if (static_cast<unsigned __int128>(q) * q > n) break;
            int v = 0;
            while (n % q == 0) { n /= q; ++v; }
            if (v) fac.emplace_back(q, v);
        }
    } else {
        auto m = static_cast<std::uint64_t>(n);
        for (long q : fb.primes) {
            auto uq = static_cast<std::uint64_t>(q);
            if (static_cast<unsigned __int128>(uq) * uq > m) break;
            if (m % uq) continue;
            int v = 0;
            while (m % uq == 0) { m /= uq; ++v; }
            fac.emplace_back(q, v);
        }
        n = m;
    }
    if (n > 1) {
        if (n > static_cast<unsigned __int128>(fb.bound)) return false;
        long q = static_cast<long>(n);
        if (!fb.above.count(q)) return false;
        bool merged = false;
        for (auto& f : fac)
            if (f.first == q) { ++f.second; merged = true; }
        if (!merged) fac.emplace_back(q, 1);
    }
    out.element = {x.a, x.b, x.c};
    out.exponents.clear();
    Z za = x.a, zb = x.b, zc = x.c;
    for (auto [q, v] : fac) {
        const auto& ab = fb.above.at(q);
        switch (ab.kind) {
            case 0:
                out.exponents.emplace_back(ab.idx[0], v);
                break;
            case 2:
                if (v % 3 != 0 || ab.idx[0] < 0) return false;
                out.exponents.emplace_back(ab.idx[0], v / 3);
                break;
            case 3: {
                int v1 = hensel_valuation(p, q, ab.roots[0], za, zb, zc, v);
                int rest = v - v1;
                if (rest % 2 != 0) throw ConsistencyFailure("valuation parity at " + std::to_string(q));
                if (v1 > 0) {
                    if (ab.idx[0] < 0) return false;
                    out.exponents.emplace_back(ab.idx[0], v1);
                }
                if (rest > 0) {
                    if (ab.idx[1] < 0) return false;
                    out.exponents.emplace_back(ab.idx[1], rest / 2);
                }
                break;
            }
            default: {
                int total = 0;
                for (int i = 0; i < 3; ++i) {
                    int vi = hensel_valuation(p, q, ab.roots[i], za, zb, zc, v);
                    total += vi;
                    if (vi > 0) {
                        if (ab.idx[i] < 0) return false;
                        out.exponents.emplace_back(ab.idx[i], vi);
                    }
                }
                if (total != v) throw ConsistencyFailure("split valuations do not add up at " + std::to_string(q));
            }
        }
    }
    std::sort(out.exponents.begin(), out.exponents.end());
    return true;
}

// (q) and (t) written over the base when every prime above q is present.
std::vector<Relation> trivial_relations(const FactorBase& fb) {
    std::vector<Relation> out;
    for (long q : fb.primes) {
        const auto& ab = fb.above.at(q);
        if (std::any_of(ab.idx.begin(), ab.idx.end(), [](int i) { return i < 0; })) continue;
        Relation r;
        if (q == fb.p) {
            r.element = {0, 1, 0};
            r.exponents = {{ab.idx[0], 1}};
        } else {
            r.element = {q, 0, 0};
            if (ab.kind == 0) r.exponents = {{ab.idx[0], 3}};
            else for (int i : ab.idx) r.exponents.emplace_back(i, 1);
        }
        std::sort(r.exponents.begin(), r.exponents.end());
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

bool verify_relation(long p, const std::vector<PrimeIdeal>& fb, const Relation& r) {
    BigInt N = abs(norm(r.element, p));
    BigInt expect = 1;
    for (auto [i, e] : r.exponents) {
        if (i < 0 || i >= static_cast<int>(fb.size()) || e < 0) return false;
        for (int k = 0; k < e; ++k) expect *= fb[i].norm();
    }
    if (N != expect) return false;
    for (auto [i, e] : r.exponents) {
        const PrimeIdeal& P = fb[i];
        if (P.degree != 1 || P.q == 3 || P.q == p) continue;
        // beta = t^2 + r t + r^2 has beta P inside qO and is a unit at P
        CubicElement beta{BigInt(P.root) * P.root, BigInt(P.root), BigInt(1)};
        CubicElement acc = r.element;
        BigInt qe = 1;
        auto divisible = [](const CubicElement& x, const BigInt& m) {
            return x.a % m == 0 && x.b % m == 0 && x.c % m == 0;
        };
        for (int k = 0; k < e; ++k) {
            acc = multiply(acc, beta, p);
            qe *= P.q;
        }
        if (!divisible(acc, qe)) return false;
        acc = multiply(acc, beta, p);
        if (divisible(acc, qe * P.q)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Linear algebra: structured elimination, dense HNF, SNF.

namespace {

struct SparseRow {
    std::vector<std::pair<int, std::int64_t>> e;
    mp::Real tag;
};

struct LinalgResult {
    bool full_rank = false;
    int empty_col = -1;
    std::vector<Z> divisors;     // all diagonal SNF entries > 1, ascending
    Z class_number = 1;
    std::vector<mp::Real> unit_logs;
};

bool combine(const SparseRow& dst, const SparseRow& piv, std::int64_t f, SparseRow& out) {
    // out = dst - f * piv
    out.e.clear();
    std::size_t i = 0, j = 0;
    while (i < dst.e.size() || j < piv.e.size()) {
        if (j == piv.e.size() || (i < dst.e.size() && dst.e[i].first < piv.e[j].first)) {
            out.e.push_back(dst.e[i++]);
        } else if (i == dst.e.size() || piv.e[j].first < dst.e[i].first) {
            std::int64_t m;
            if (__builtin_mul_overflow(piv.e[j].second, -f, &m)) return false;
            out.e.emplace_back(piv.e[j].first, m);
            ++j;
        } else {
            std::int64_t m, s;
            if (__builtin_mul_overflow(piv.e[j].second, f, &m)) return false;
            if (__builtin_sub_overflow(dst.e[i].second, m, &s)) return false;
            if (s != 0) out.e.emplace_back(dst.e[i].first, s);
            ++i;
            ++j;
        }
    }
    for (const auto& [c, v] : out.e)
        if (v > (std::int64_t(1) << 40) || v < -(std::int64_t(1) << 40)) return false;
    out.tag = dst.tag - piv.tag * f;
    return true;
}

LinalgResult solve(std::vector<SparseRow> rows, int ncols, long tag_prec) {
    LinalgResult res;
    std::vector<char> row_alive(rows.size(), 1), col_alive(static_cast<std::size_t>(ncols), 1);
    auto harvest_zero = [&](std::size_t i) {
        if (row_alive[i] && rows[i].e.empty()) {
            res.unit_logs.push_back(rows[i].tag);
            row_alive[i] = 0;
        }
    };
    for (std::size_t i = 0; i < rows.size(); ++i) harvest_zero(i);

    // structured elimination on +-1 pivots
    std::vector<int> count(static_cast<std::size_t>(ncols));
    for (;;) {
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (row_alive[i])
                for (auto& [c, v] : rows[i].e) ++count[c];
        for (int c = 0; c < ncols; ++c)
            if (col_alive[c] && count[c] == 0) {  // a free generator: rank deficient
                res.empty_col = c;
                return res;
            }
        long best = -1;
        std::size_t br = 0;
        int bc = -1;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!row_alive[i]) continue;
            long w = static_cast<long>(rows[i].e.size());
            for (auto& [c, v] : rows[i].e) {
                if (v != 1 && v != -1) continue;
                long cost = (w - 1) * (count[c] - 1);
                if (best < 0 || cost < best) { best = cost; br = i; bc = c; }
            }
        }
        if (bc < 0) break;
        const SparseRow piv = rows[br];
        std::int64_t pv = 0;
        for (auto& [c, v] : piv.e)
            if (c == bc) pv = v;
        std::vector<std::pair<std::size_t, SparseRow>> updates;
        bool ok = true;
        for (std::size_t i = 0; i < rows.size() && ok; ++i) {
            if (!row_alive[i] || i == br) continue;
            auto it = std::lower_bound(rows[i].e.begin(), rows[i].e.end(), std::make_pair(bc, std::int64_t(INT64_MIN)));
            if (it == rows[i].e.end() || it->first != bc) continue;
            SparseRow nr;
            ok = combine(rows[i], piv, it->second * pv, nr);
            if (ok) updates.emplace_back(i, std::move(nr));
        }
        if (!ok) break;  // entries growing: leave the rest to the dense stage
        for (auto& [i, nr] : updates) rows[i] = std::move(nr);
        row_alive[br] = 0;
        col_alive[bc] = 0;
        for (auto& [i, nr] : updates) harvest_zero(i);
    }

    // dense stage
    std::vector<int> colmap(static_cast<std::size_t>(ncols), -1);
    int C = 0;
    for (int c = 0; c < ncols; ++c)
        if (col_alive[c]) colmap[c] = C++;
    std::vector<std::vector<Z>> M;
    std::vector<mp::Real> tags;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!row_alive[i]) continue;
        std::vector<Z> r(static_cast<std::size_t>(C));
        for (auto& [c, v] : rows[i].e) r[colmap[c]] = v;
        M.push_back(std::move(r));
        tags.push_back(rows[i].tag);
    }
    const std::size_t R = M.size();
    mp::Real tmp(tag_prec);
    auto rowop = [&](std::size_t dst, std::size_t src, const Z& f, int from) {
        // row dst -= f * row src
        for (int k = from; k < C; ++k)
            if (!M[src][k].is_zero()) M[dst][k] -= f * M[src][k];
        mpfr_mul_z(tmp.get(), tags[src].get(), f.backend().data(), MPFR_RNDN);
        tags[dst] -= tmp;
    };
    std::size_t pr = 0;
    for (int j = 0; j < C; ++j) {
        for (;;) {
            std::size_t m = R;
            for (std::size_t i = pr; i < R; ++i)
                if (!M[i][j].is_zero() && (m == R || abs(M[i][j]) < abs(M[m][j]))) m = i;
            if (m == R) return res;  // no pivot in column j
            std::swap(M[m], M[pr]);
            std::swap(tags[m], tags[pr]);
            bool more = false;
            for (std::size_t i = pr + 1; i < R; ++i) {
                if (M[i][j].is_zero()) continue;
                Z q = M[i][j] / M[pr][j];  // truncation keeps |remainder| < |pivot|
                rowop(i, pr, q, j);
                if (!M[i][j].is_zero()) more = true;
            }
            if (!more) break;
        }
        if (M[pr][j] < 0) {
            for (int k = j; k < C; ++k) M[pr][k] = -M[pr][k];
            tags[pr] = -tags[pr];
        }
        ++pr;
    }
    for (std::size_t i = pr; i < R; ++i) res.unit_logs.push_back(tags[i]);
    res.full_rank = true;

    // H is C x C upper triangular; drop unit pivots by reducing the rows above
    std::vector<std::vector<Z>> H(M.begin(), M.begin() + C);
    for (int j = 0; j < C; ++j) {
        for (int i = 0; i < j; ++i) {
            if (H[i][j].is_zero()) continue;
            Z q = H[i][j] / H[j][j];
            if (H[i][j] - q * H[j][j] < 0) q -= 1;
            if (q.is_zero()) continue;
            for (int k = j; k < C; ++k)
                if (!H[j][k].is_zero()) H[i][k] -= q * H[j][k];
        }
    }
    std::vector<int> J;
    for (int j = 0; j < C; ++j) {
        res.class_number *= H[j][j];
        if (H[j][j] != 1) J.push_back(j);
    }
    const std::size_t n = J.size();
    std::vector<std::vector<Z>> S(n, std::vector<Z>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) S[a][b] = H[J[a]][J[b]];

    // Smith normal form
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::size_t bi = n, bj = n;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (!S[i][j].is_zero() && (bi == n || abs(S[i][j]) < abs(S[bi][bj]))) { bi = i; bj = j; }
            if (bi == n) break;
            std::swap(S[t], S[bi]);
            for (auto& row : S) std::swap(row[t], row[bj]);
            bool dirty = false;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (S[i][t].is_zero()) continue;
                Z q = S[i][t] / S[t][t];
                for (std::size_t k = t; k < n; ++k) S[i][k] -= q * S[t][k];
                if (!S[i][t].is_zero()) dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (S[t][j].is_zero()) continue;
                Z q = S[t][j] / S[t][t];
                for (std::size_t k = t; k < n; ++k) S[k][j] -= q * S[k][t];
                if (!S[t][j].is_zero()) dirty = true;
            }
            if (dirty) continue;
            std::size_t bad = n;
            for (std::size_t i = t + 1; i < n && bad == n; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (S[i][j] % S[t][t] != 0) { bad = i; break; }
            if (bad == n) break;
            for (std::size_t k = t; k < n; ++k) S[t][k] += S[bad][k];
        }
        Z d = abs(S[t][t]);
        if (d > 1) res.divisors.push_back(d);
    }
    std::sort(res.divisors.begin(), res.divisors.end());
    return res;
}

// Real gcd of unit logarithms; values below tol are treated as torsion.
mp::Real real_gcd(const std::vector<mp::Real>& logs, double tol, long prec) {
    mp::Real g(prec);
    bool have = false;
    for (const auto& l0 : logs) {
        mp::Real l = mp::abs(l0).at(prec);
        if (l.to_double() < tol) continue;
        if (!have) { g = l; have = true; continue; }
        mp::Real a = g, b = l;
        if (a < b) std::swap(a, b);
        while (b.to_double() >= tol) {
            mp::Real r = a - mp::round(a / b) * b;
            a = b;
            b = mp::abs(r);
        }
        g = a;
    }
    return g;
}

struct RunOutput {
    ClassGroupStructure cg;
    mp::Real regulator;
};

RunOutput run_class_group(long p, const ClassGroupOptions& opt) {
    check_family_like(p);
    RunOutput out;
    ClassGroupStructure& cg = out.cg;
    cg.p = p;
    cg.seed = opt.seed;
    const bool proved = !opt.force_grh && p <= opt.proved_limit;
    cg.certificate = proved ? Certificate::ProvedByEnumeration : Certificate::GrhAnalytic;
    double mb = minkowski_bound(p);
    long bound = static_cast<long>(std::floor(proved ? mb : std::min(mb, bach_bound(p))));
    bound = std::max(bound, 2L);
    FactorBase fb = make_factor_base(p, bound);
    cg.factor_base_bound = bound;
    cg.factor_base_size = static_cast<long>(fb.ideals.size());

    cg.l1_rho = artin_l1(p);
    cg.l1_rho_euler = artin_l1_euler(p);
    const double sqrt_d = std::sqrt(27.0) * static_cast<double>(p);
    cg.analytic_hR = sqrt_d * cg.l1_rho / (2 * M_PI);

    int extra, max_rounds;
    long per_round;
    switch (opt.effort) {
        case Effort::Low: extra = 10; max_rounds = 4; per_round = 50000; break;
        case Effort::High: extra = 60; max_rounds = 16; per_round = 1000000; break;
        default: extra = 25; max_rounds = 8; per_round = 200000; break;
    }

    const long k = static_cast<long>(fb.ideals.size());
    std::vector<Relation> rels = trivial_relations(fb);
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t>> seen;
    std::mt19937_64 rng(opt.seed);
    const double theta = std::cbrt(static_cast<double>(p));
    double S = 4;
    long target = k + extra;
    const long tag_prec = std::max(64L, opt.tag_precision);
    const double tol = 0.2;

    for (int round = 1; round <= max_rounds; ++round) {
        cg.rounds = round;
        long tries = 0, dups = 0;
        while (static_cast<long>(rels.size()) < target && tries < per_round) {
            ++tries;
            Candidate x{};
            if (rng() % 4 != 0) {
                long bmax = static_cast<long>(S);
                long amax = static_cast<long>(std::ceil(S * theta));
                x.b = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(bmax));
                x.a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * amax + 1)) - amax;
                x.c = 0;
            } else {
                double s3 = std::max(1.0, S / 3);
                long cmax = static_cast<long>(s3);
                long bmax = static_cast<long>(std::ceil(s3 * theta));
                long amax = static_cast<long>(std::ceil(s3 * theta * theta));
                x.c = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cmax));
                x.b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * bmax + 1)) - bmax;
                x.a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * amax + 1)) - amax;
            }
            if (std::gcd(std::gcd(x.a, x.b), x.c) != 1) continue;
            if (!seen.insert({x.a, x.b, x.c}).second) {
                if (++dups > 50 && dups * 2 > tries) {
                    S *= 1.25;
                    dups = 0;
                    tries = 0;
                }
                continue;
            }
            Relation r;
            if (factor_candidate(fb, x, r)) rels.push_back(std::move(r));
        }

        // elements a + b t inside ideals that no relation touches yet
        std::vector<int> hits(static_cast<std::size_t>(k), 0);
        for (const auto& r : rels)
            for (auto [i, e] : r.exponents) ++hits[i];
        for (int i = 0; i < k; ++i) {
            const PrimeIdeal& P = fb.ideals[i];
            const int want = 1 + round;
            if (hits[i] >= want || P.degree != 1 || P.q == 3 || P.q == p) continue;
            for (long t = 0; t < 4000 && hits[i] < want; ++t) {
                Candidate x{};
                // a is about q anyway, so b may range further than in the main search
                x.b = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(std::max(64.0, 4 * S)));
                std::int64_t a0 = static_cast<std::int64_t>((static_cast<__int128>(P.q - P.root) * x.b) % P.q);
                x.a = a0 - P.q * static_cast<std::int64_t>(rng() % 2);
                if (std::gcd(x.a, x.b) != 1 || !seen.insert({x.a, x.b, 0}).second) continue;
                Relation r;
                if (factor_candidate(fb, x, r)) {
                    for (auto [j, e] : r.exponents) ++hits[j];
                    rels.push_back(std::move(r));
                }
            }
        }

        long verified = 0;
        for (const auto& r : rels)
            if (verify_relation(p, fb.ideals, r)) ++verified;
        cg.relations = static_cast<long>(rels.size());
        cg.relations_verified = verified;
        if (verified != cg.relations) throw ConsistencyFailure("a relation failed post-hoc verification");

        std::vector<SparseRow> rows;
        rows.reserve(rels.size());
        for (const auto& r : rels) {
            SparseRow s;
            for (auto [i, e] : r.exponents) s.e.emplace_back(i, e);
            s.tag = mp::log(mp::abs(real_embedding(r.element, p, tag_prec)));
            rows.push_back(std::move(s));
        }
        LinalgResult lr = solve(std::move(rows), static_cast<int>(k), tag_prec);
        if (lr.full_rank) {
            mp::Real R = real_gcd(lr.unit_logs, tol, tag_prec);
            if (!R.is_zero()) {
                double h = lr.class_number.convert_to<double>();
                double ratio = h * R.to_double() / cg.analytic_hR;
                if (ratio < 1 / std::sqrt(2.0))
                    throw ConsistencyFailure("hR from relations is below the analytic value (ratio " +
                                             std::to_string(ratio) + ")");
                if (ratio < std::sqrt(2.0)) {
                    cg.class_number = to_big(lr.class_number);
                    for (const auto& d : lr.divisors) {
                        cg.elementary_divisors.push_back(to_big(d));
                        if (d % 2 == 0) ++cg.two_rank;
                    }
                    cg.regulator = R.to_double();
                    cg.ratio = ratio;
                    out.regulator = R;
                    return out;
                }
            }
        }
        target += k / 4 + extra;
    }
    throw NeedsMoreEffort("class group of Q(cbrt " + std::to_string(p) + ") not certified after " +
                          std::to_string(max_rounds) + " rounds at effort " + to_string(opt.effort));
}

}  // namespace

ClassGroupStructure class_group(long p, const ClassGroupOptions& opt) {
    if (p % 2 == 0) throw UnsupportedPrime("p must be odd");
    return run_class_group(p, opt).cg;
}

ClassGroupStructure class_group(long p, Effort effort) {
    ClassGroupOptions opt;
    opt.effort = effort;
    return class_group(p, opt);
}

FundamentalUnit fundamental_unit(long p, const ClassGroupOptions& opt_in) {
    ClassGroupOptions opt = opt_in;
    RunOutput first = run_class_group(p, opt);
    const double R0 = first.cg.regulator;
    const long bits = static_cast<long>(R0 * 1.4427) + 3 * static_cast<long>(std::log2(static_cast<double>(p)) + 1) + 96;
    RunOutput run = first;
    if (bits > opt.tag_precision) {
        opt.tag_precision = bits;
        run = run_class_group(p, opt);
    }
    const mp::Real& R = run.regulator;
    const long wp = R.prec();

    auto from_log = [&](const mp::Real& L) {
        mp::Real E = mp::exp(L);
        mp::Real t = mp::cbrt(mp::Real(p, wp));
        auto rnd = [](const mp::Real& v) {
            Z z;
            mpfr_get_z(z.backend().data(), v.get(), MPFR_RNDN);
            return to_big(z);
        };
        CubicElement u;
        u.a = rnd(E / 3);
        u.b = rnd(E / (t * 3));
        u.c = rnd(E / (t * t * 3));
        return u;
    };
    auto matches = [&](const CubicElement& u, const mp::Real& L) {
        if (norm(u, p) != 1) return false;
        mp::Real s = real_embedding(u, p, wp);
        if (s.sign() <= 0) return false;
        return mp::abs(mp::log(s) - L).to_double() < 1e-6;
    };

    FundamentalUnit fu;
    fu.log_unit = R;
    fu.unit = from_log(R);
    if (!matches(fu.unit, R)) {
        fu.note = "reconstruction from the regulator failed";
        return fu;
    }
    // Artin: a fundamental unit e > 1 of a complex cubic field has |d| < 4 e^3 + 24
    double d = 27.0 * static_cast<double>(p) * static_cast<double>(p);
    double l0 = std::log(d / 4 - 6) / 3;
    long kmax = static_cast<long>(R.to_double() / l0);
    for (long kk = 2; kk <= kmax; ++kk) {
        if (!is_prime(static_cast<std::uint64_t>(kk))) continue;
        mp::Real Lk = R / kk;
        CubicElement v = from_log(Lk);
        if (matches(v, Lk)) {
            fu.note = "unit is a " + std::to_string(kk) + "-th power";
            return fu;
        }
    }
    fu.certified = true;
    fu.note = "norm 1; no k-th root for prime k <= " + std::to_string(std::max(kmax, 1L));
    return fu;
}

}  // namespace cubicbsd
