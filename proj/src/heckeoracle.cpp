#include "cubicbsd/heckeoracle.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "cubicbsd/eisenstein.hpp"
#include "cubicbsd/errors.hpp"

namespace cubicbsd {

namespace {

struct FamilyShape {
    long i = 0, j = 0, q = 0;  // n = 2^i q^j
};

FamilyShape parse_n(long n) {
    if (n < 1) throw DomainError("n must be positive");
    FamilyShape s;
    long r = n;
    while (r % 2 == 0) { r /= 2; ++s.i; }
    if (r > 1) {
        for (long d = 5; d * d <= r; ++d) {
            if (r % d == 0) { s.q = d; break; }
        }
        if (s.q == 0) s.q = r;
        while (r % s.q == 0) { r /= s.q; ++s.j; }
    }
    if (r != 1 || s.i > 2 || s.j > 2 || (s.q != 0 && (s.q <= 3 || !is_prime(static_cast<std::uint64_t>(s.q)))))
        throw DomainError("n = " + std::to_string(n) + " is not of the form 2^i p^j with i, j <= 2 and p > 3 prime");
    return s;
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
    __int128 r = 1, x = ((a % m) + m) % m;
    while (e) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

// primary a + b w of prime norm q = 1 (mod 3)
std::pair<std::int64_t, std::int64_t> primary_of_norm(std::int64_t q) {
    // 4q = (2a - b)^2 + 3 b^2
    for (std::int64_t b = 1; 3 * b * b <= 4 * q; ++b) {
        std::int64_t r = 4 * q - 3 * b * b;
        auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(r))));
        while (s * s > r) --s;
        while ((s + 1) * (s + 1) <= r) ++s;
        if (s * s != r || (s + b) % 2 != 0) continue;
        std::int64_t a = (s + b) / 2, bb = b;
        for (int k = 0; k < 6; ++k) {
            if (((a % 3) + 3) % 3 == 1 && bb % 3 == 0) return {a, bb};
            // multiply by -w: (a + b w)(-w) = b + (b - a) w
            std::int64_t na = bb, nb = bb - a;
            a = na;
            bb = nb;
        }
    }
    throw DomainError("no element of norm " + std::to_string(q));
}

std::vector<std::int32_t> smallest_prime_factors(long X) {
    std::vector<std::int32_t> spf(static_cast<std::size_t>(X + 1), 0);
    for (long i = 2; i <= X; ++i) {
        if (spf[i]) continue;
        for (long j = i; j <= X; j += i) {
            if (!spf[j]) spf[j] = static_cast<std::int32_t>(i);
        }
    }
    return spf;
}

}  // namespace

std::vector<long> bad_primes(long n) {
    FamilyShape s = parse_n(n);
    std::vector<long> out;
    if (s.i > 0) out.push_back(2);
    out.push_back(3);
    if (s.q) out.push_back(s.q);
    return out;
}

HeckeSeries hecke_coefficients(long n, long X) {
    if (X < 2) throw DomainError("series length must be at least 2");
    std::vector<long> bad = bad_primes(n);
    auto is_bad = [&](long q) { return std::find(bad.begin(), bad.end(), q) != bad.end(); };

    auto spf = smallest_prime_factors(X);
    HeckeSeries hs;
    hs.n = n;
    hs.coefficients.assign(static_cast<std::size_t>(X + 1), 0);
    auto& a = hs.coefficients;
    a[1] = 1;

    // prime powers first
    for (long q = 2; q <= X; ++q) {
        if (spf[q] != q) continue;
        if (is_bad(q)) continue;  // every a_{q^k} stays 0 at additive reduction
        std::int64_t aq = 0;
        if (q % 3 == 1) {
            auto [pa, pb] = primary_of_norm(q);
            // w = -pa/pb modulo the prime (pa + pb w)
            std::int64_t wq = ((-pa % q + q) % q) * powmod(pb, q - 2, q) % q;
            std::int64_t r = powmod(n, (q - 1) / 3, q);
            int k = (r == 1) ? 0 : (r == wq ? 1 : 2);
            // conj(w^k) pi = w^{-k} pi; multiply by w^2 = w^{-1}, k times
            std::int64_t x = pa, y = pb;
            for (int t = 0; t < k; ++t) {
                // (x + y w) w^2 = x w^2 + y = y - x - x w
                std::int64_t nx = y - x, ny = -x;
                x = nx;
                y = ny;
            }
            aq = 2 * x - y;  // 2 Re(x + y w)
        }
        std::int64_t prev = 1, cur = aq;
        for (long qk = q;;) {
            a[qk] = cur;
            if (qk > X / q) break;
            qk *= q;
            std::int64_t next = aq * cur - q * prev;
            prev = cur;
            cur = next;
        }
    }
    for (long m = 2; m <= X; ++m) {
        long q = spf[m], r = m;
        while (r % q == 0) r /= q;
        if (r == 1) continue;
        a[m] = a[m / r] * a[r];
    }
    return hs;
}

std::vector<long> conductor_grid(long n) {
    FamilyShape s = parse_n(n);
    long base = s.q ? s.q * s.q : 1;
    std::vector<long> out;
    long p2 = 1;
    for (int x = 0; x <= 8; ++x, p2 *= 2) {
        long p3 = 1;
        for (int y = 0; y <= 5; ++y, p3 *= 3) out.push_back(base * p2 * p3);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

using ld = long double;

// Gamma(s, x) for s in {-1, 0, 1, 2, 3}
ld inc_gamma(int s, ld x) {
    ld e = std::exp(-x);
    switch (s) {
        case 1: return e;
        case 2: return (1 + x) * e;
        case 3: return (2 + 2 * x + x * x) * e;
        case 0: return boost::math::expint(1, x);
        case -1: return e / x - boost::math::expint(1, x);
    }
    throw DomainError("unsupported incomplete gamma order");
}

struct HalfSums {
    ld first = 0, second = 0, abs_total = 0;
};

// Lambda_A(s) = sum a_m [(T/m)^s G(s, mA/T) + eps (T/m)^{2-s} G(2-s, m/(AT))]
HalfSums lambda_parts(const std::vector<std::int64_t>& a, ld T, int s, ld A, long M) {
    HalfSums h;
    for (long m = 1; m <= M; ++m) {
        if (a[m] == 0) continue;
        ld r = T / m;
        ld x1 = m * A / T, x2 = m / (A * T);
        if (x1 > 50 && x2 > 50) break;
        ld t1 = x1 > 50 ? 0 : std::pow(r, s) * inc_gamma(s, x1);
        ld t2 = x2 > 50 ? 0 : std::pow(r, 2 - s) * inc_gamma(2 - s, x2);
        h.first += a[m] * t1;
        h.second += a[m] * t2;
        h.abs_total += std::fabs(static_cast<ld>(a[m])) * (std::fabs(t1) + std::fabs(t2));
    }
    return h;
}

struct Window {
    ld a_low, a_high;
    long terms;
};

Window window_for(ld T, ld Tmin, const SymmetryOptions& opt) {
    Window w;
    w.a_high = std::max(opt.min_a, T / (opt.kappa * Tmin * Tmin));
    w.a_low = w.a_high / opt.ratio;
    w.terms = static_cast<long>(std::ceil(std::max(50 * T / w.a_low, 50 * w.a_high * T))) + 2;
    return w;
}

ld mismatch_at(const std::vector<std::int64_t>& a, ld T, int s, const Window& w, int eps) {
    HalfSums p = lambda_parts(a, T, s, w.a_low, w.terms);
    HalfSums q = lambda_parts(a, T, s, w.a_high, w.terms);
    ld l1 = p.first + eps * p.second, l2 = q.first + eps * q.second;
    ld scale = std::max(p.abs_total, q.abs_total);
    return scale > 0 ? std::fabs(l1 - l2) / scale : 0;
}

}  // namespace

ConductorResolution resolve_conductor(long n, const SymmetryOptions& opt) {
    std::vector<long> grid = conductor_grid(n);
    const ld two_pi = 2 * std::acos(-1.0L);
    auto tee = [&](long N) { return std::sqrt(static_cast<ld>(N)) / two_pi; };
    const ld Tmin = tee(grid.front());
    long X = 2;
    for (long N : grid) X = std::max(X, window_for(tee(N), Tmin, opt).terms);
    HeckeSeries hs = hecke_coefficients(n, X);

    ConductorResolution res;
    res.runner_up = std::numeric_limits<ld>::infinity();
    for (long N : grid) {
        ld T = tee(N);
        Window w = window_for(T, Tmin, opt);
        for (int eps : {1, -1}) {
            // s = 1 needs only exponentials: a cheap first filter
            ld worst = mismatch_at(hs.coefficients, T, 1, w, eps);
            if (worst <= opt.tolerance) {
                for (int t : opt.offsets) {
                    if (t == 0) continue;
                    worst = std::max(worst, mismatch_at(hs.coefficients, T, 1 + t, w, eps));
                }
            }
            if (worst <= opt.tolerance) {
                res.passing.push_back({N, eps, worst});
            } else {
                res.runner_up = std::min(res.runner_up, worst);
            }
        }
    }
    if (res.passing.size() != 1) {
        std::string msg = "conductor resolution for n = " + std::to_string(n) + ": " +
                          std::to_string(res.passing.size()) + " candidates pass the symmetry test";
        for (const auto& c : res.passing) msg += " (" + std::to_string(c.conductor) + ", " + std::to_string(c.root_number) + ")";
        throw ConductorResolutionFailure(msg);
    }
    res.conductor = res.passing[0].conductor;
    res.root_number = res.passing[0].root_number;
    res.mismatch = res.passing[0].mismatch;
    return res;
}

namespace {

std::mutex cache_mu;
std::map<long, ConductorResolution> resolution_cache;

ConductorResolution cached_resolution(long n) {
    {
        std::lock_guard<std::mutex> lk(cache_mu);
        auto it = resolution_cache.find(n);
        if (it != resolution_cache.end()) return it->second;
    }
    ConductorResolution r = resolve_conductor(n);
    std::lock_guard<std::mutex> lk(cache_mu);
    resolution_cache.emplace(n, r);
    return r;
}

}  // namespace

OracleValue lvalue_oracle(long n, long precision_bits) {
    if (precision_bits < 53) throw ConfigurationError("precision below 53 bits");
    ConductorResolution cr = cached_resolution(n);
    OracleValue out;
    out.conductor = cr.conductor;
    out.root_number = cr.root_number;
    const long W = precision_bits + 32;
    out.value = mp::Real(W);
    out.error_estimate = mp::Real(W);
    if (cr.root_number == -1) {
        // the functional equation forces L(1) = 0 exactly
        out.value = mp::Real(0L, precision_bits);
        out.error_estimate = mp::Real(0L, precision_bits);
        return out;
    }
    // L(1) = 2 sum a_m/m exp(-m/T), T = sqrt(N)/(2 pi)
    mp::Real T = mp::sqrt(mp::Real(cr.conductor, W)) / (mp::pi(W) * 2L);
    long M = static_cast<long>(std::ceil(T.to_double() * (precision_bits * std::log(2.0) + 30))) + 2;
    HeckeSeries hs = hecke_coefficients(n, M);
    mp::Real r = mp::exp(-(mp::Real(1L, W) / T));
    mp::Real e = r;
    mp::Real sum(W), abs_sum(W);
    for (long m = 1; m <= M; ++m, e *= r) {
        if (hs.coefficients[m] == 0) continue;
        mp::Real t = e * static_cast<long>(hs.coefficients[m]) / m;
        sum += t;
        abs_sum += mp::abs(t);
    }
    out.value = (sum * 2L).at(precision_bits);
    // tail: |a_m| <= m for every m here, so the tail is below sum_{m>M} e^{-m/T}
    mp::Real tail = e * T * 4L;
    out.error_estimate = (abs_sum * mp::pow2(-W + 8, W) * static_cast<long>(M) + tail).at(precision_bits);
    out.terms = M;
    return out;
}

ProbeResult lprime_probe(long n, long precision_bits) {
    ConductorResolution cr = cached_resolution(n);
    if (cr.root_number != -1)
        throw DomainError("lprime_probe needs root number -1; C_" + std::to_string(n) + " has +1");
    const long W = precision_bits + 32;
    ProbeResult out;
    out.conductor = cr.conductor;
    // L'(1) = 2 sum a_m/m E1(m/T)
    mp::Real T = mp::sqrt(mp::Real(cr.conductor, W)) / (mp::pi(W) * 2L);
    long M = static_cast<long>(std::ceil(T.to_double() * (precision_bits * std::log(2.0) + 30))) + 2;
    HeckeSeries hs = hecke_coefficients(n, M);
    mp::Real sum(W), abs_sum(W);
    for (long m = 1; m <= M; ++m) {
        if (hs.coefficients[m] == 0) continue;
        mp::Real x = mp::Real(m, W) / T;
        mp::Real t = mp::expint_e1(x) * static_cast<long>(hs.coefficients[m]) / m;
        sum += t;
        abs_sum += mp::abs(t);
    }
    out.value = (sum * 2L).at(precision_bits);
    mp::Real tail = mp::exp(-(mp::Real(M, W) / T)) * T * 4L;
    out.error_estimate = (abs_sum * mp::pow2(-W + 8, W) * static_cast<long>(M) + tail).at(precision_bits);
    out.conclusive = mp::abs(out.value) > out.error_estimate * 1000L;
    return out;
}

}  // namespace cubicbsd
