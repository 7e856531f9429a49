#include "cubicbsd/lattice.hpp"

#include <cmath>
#include <map>
#include <set>

#include "cubicbsd/errors.hpp"

namespace cubicbsd {

namespace detail {

struct WeierstrassKernel {
    long prec = 0;
    mp::Real omega, sqrt3, half_sqrt3;
    mp::Complex omega_w;  // Omega * w
    // coefficients in t = z^6 of z^2 wp, z^3 wp' and z zeta
    std::vector<mp::Real> wp_c, dwp_c, zeta_c;
    mp::Real eta1;        // zeta(z + Omega) - zeta(z)
    mp::Complex eta2;     // zeta(z + Omega w) - zeta(z)
    mp::Real s2, inv_a;
};

}  // namespace detail

namespace {

using detail::WeierstrassKernel;
using mp::Complex;
using mp::Real;

struct Reduced {
    Complex z;
    long n1 = 0, n2 = 0;  // z_in = z + n1 Omega + n2 Omega w
};

Reduced reduce(const WeierstrassKernel& k, const Complex& z) {
    Real x = z.re / k.omega, y = z.im / k.omega;
    Real v = y / k.half_sqrt3;
    Real u = x + v / 2;
    long u0 = mp::get_si(mp::floor(u)), v0 = mp::get_si(mp::floor(v));
    Reduced best;
    bool have = false;
    Real best_norm(k.prec);
    for (long du = 0; du <= 1; ++du) {
        for (long dv = 0; dv <= 1; ++dv) {
            long n1 = u0 + du, n2 = v0 + dv;
            Complex w = z - Complex(k.omega * n1, Real(0L, k.prec)) - k.omega_w * n2;
            Real nn = w.norm();
            if (!have || nn < best_norm) {
                best = Reduced{w, n1, n2};
                best_norm = nn;
                have = true;
            }
        }
    }
    return best;
}

Complex horner(const std::vector<Real>& c, const Complex& t, long prec) {
    Complex acc(prec);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * t;
        acc.re += *it;
    }
    return acc;
}

// series values at a small argument (no reduction)
WpValue wp_series(const WeierstrassKernel& k, const Complex& z) {
    Complex z2 = z * z;
    Complex t = z2 * z2 * z2;
    Complex zi = mp::inverse(z);
    Complex zi2 = zi * zi;
    Complex x = zi2 * horner(k.wp_c, t, k.prec);
    Complex y = zi2 * zi * horner(k.dwp_c, t, k.prec);
    return {x, y};
}

Complex zeta_series(const WeierstrassKernel& k, const Complex& z) {
    Complex z2 = z * z;
    Complex t = z2 * z2 * z2;
    return mp::inverse(z) * horner(k.zeta_c, t, k.prec);
}

WpValue duplicate(const WpValue& p) {
    Complex lam = (p.x * p.x * 6L) / p.y;
    Complex x3 = lam * lam / 4L - p.x * 2L;
    Complex y3 = -(p.y + lam * (x3 - p.x));
    return {x3, y3};
}

WpValue wp_local(const WeierstrassKernel& k, const Complex& z) {
    return duplicate(wp_series(k, z / 2L));
}

// zeta(2u) = 2 zeta(u) + 3 wp(u)^2 / wp'(u)
Complex zeta_local(const WeierstrassKernel& k, const Complex& z) {
    Complex u = z / 2L;
    WpValue p = wp_series(k, u);
    return zeta_series(k, u) * 2L + (p.x * p.x * 3L) / p.y;
}

void check_not_lattice(const WeierstrassKernel& k, const Complex& z) {
    Real tiny = mp::pow2(-(k.prec / 2), k.prec);
    if (z.norm() < tiny * tiny) throw LatticePointError("argument lies on the period lattice");
}

}  // namespace

PeriodData compute_period(long precision_bits) {
    if (precision_bits < 53) throw ConfigurationError("precision below 53 bits");
    const long P = precision_bits;
    auto k = std::make_shared<WeierstrassKernel>();
    k->prec = P;

    // Omega = 2 pi / AGM(2 sqrt(b), sqrt(2b + 3 e1)), e1 = 4^(-1/3), b = sqrt(3) e1
    Real three(3L, P);
    Real e1 = Real(1L, P) / mp::cbrt(Real(4L, P));
    Real sqrt3 = mp::sqrt(three);
    Real b = sqrt3 * e1;
    Real pi = mp::pi(P);
    Real omega = pi * 2L / mp::agm(mp::sqrt(b) * 2L, mp::sqrt(b * 2L + e1 * 3L));

    k->omega = omega;
    k->sqrt3 = sqrt3;
    k->half_sqrt3 = sqrt3 / 2L;
    k->omega_w = Complex(-omega / 2L, omega * k->half_sqrt3);

    // Laurent coefficients: wp = z^-2 + sum_{n>=2} c_n z^{2n-2}, c_2 = 0, c_3 = 1/28
    // Terms are evaluated at |z| <= Omega/(2 sqrt 3), ratio 0.29 per power of z^2.
    long J = P / 10 + 6;
    long N = 3 * J;
    std::vector<Real> c(N + 1, Real(P));
    c[3] = Real(1L, P) / 28L;
    for (long n = 4; n <= N; ++n) {
        Real s(P);
        for (long m = 2; m <= n - 2; ++m) {
            if (c[m].is_zero() || c[n - m].is_zero()) continue;
            s += c[m] * c[n - m];
        }
        c[n] = s * 3L / ((2 * n + 1) * (n - 3));
    }
    k->wp_c.assign(1, Real(1L, P));
    k->dwp_c.assign(1, Real(-2L, P));
    k->zeta_c.assign(1, Real(1L, P));
    for (long j = 1; j <= J; ++j) {
        const Real& cj = c[3 * j];
        k->wp_c.push_back(cj);
        k->dwp_c.push_back(cj * (6 * j - 2));
        k->zeta_c.push_back(-cj / (6 * j - 1));
    }

    PeriodData out;
    out.omega = omega;
    out.precision_bits = P;
    out.a_of_L = sqrt3 * omega * omega / (pi * 2L);
    Complex half(omega / 2L, Real(0L, P));
    out.zeta_half = zeta_local(*k, half).re;
    out.s2_of_L = out.zeta_half * 2L / omega - pi * 2L / (sqrt3 * omega * omega);
    k->eta1 = out.zeta_half * 2L;
    // zeta(w z) = w^{-1} zeta(z), so eta(Omega w) = conj(w) eta(Omega)
    k->eta2 = Complex(-k->eta1 / 2L, -k->eta1 * k->half_sqrt3);
    k->s2 = out.s2_of_L;
    k->inv_a = Real(1L, P) / out.a_of_L;

    WpValue third = wp_local(*k, Complex(omega / 3L, Real(0L, P)));
    out.wp_third = {third.x, third.y};
    out.kernel = k;
    return out;
}

WpValue weierstrass_p(const PeriodData& period, const Complex& z) {
    const auto& k = *period.kernel;
    Reduced r = reduce(k, z.prec() == k.prec ? z : Complex(z.re.at(k.prec), z.im.at(k.prec)));
    check_not_lattice(k, r.z);
    return wp_local(k, r.z);
}

Complex weierstrass_zeta(const PeriodData& period, const Complex& z) {
    const auto& k = *period.kernel;
    Reduced r = reduce(k, z.prec() == k.prec ? z : Complex(z.re.at(k.prec), z.im.at(k.prec)));
    check_not_lattice(k, r.z);
    Complex out = zeta_local(k, r.z);
    out.re += k.eta1 * r.n1;
    out += k.eta2 * r.n2;
    return out;
}

Complex eisenstein_e1star(const PeriodData& period, const Complex& z) {
    const auto& k = *period.kernel;
    Complex zeta = weierstrass_zeta(period, z);
    return zeta - z * k.s2 - z.conj() * k.inv_a;
}

Complex division_point(const PeriodData& period, long a, long b, long m) {
    const auto& k = *period.kernel;
    Real s = k.omega / m;
    Real re = s * (Real(a, k.prec) - Real(b, k.prec) / 2L);
    Real im = s * k.half_sqrt3 * b;
    return Complex(re, im);
}

Complex division_point(const PeriodData& period, const EisensteinInteger& c, long m) {
    const auto& k = *period.kernel;
    Real a(c.a().str(), k.prec), b(c.b().str(), k.prec);
    Real s = k.omega / m;
    return Complex(s * (a - b / 2L), s * k.half_sqrt3 * b);
}

Real curve_residual(const WpValue& v) {
    Complex lhs = v.y * v.y;
    Complex rhs = v.x * v.x * v.x * 4L;
    rhs.re -= Real(1L, rhs.prec());
    return (lhs - rhs).abs();
}

void WalkStats::merge(const WalkStats& o) {
    if (o.max_residual > max_residual) max_residual = o.max_residual;
    if (o.max_drift > max_drift) max_drift = o.max_drift;
    anchors += o.anchors;
    steps += o.steps;
}

namespace {

// P <- P + Q by the chord rule on y^2 = 4x^3 - 1
struct ChordAdder {
    explicit ChordAdder(long prec) : lam(prec), dx(prec), dy(prec), t(prec), t1(prec), t2(prec), t3(prec) {}
    void add(WpValue& p, const WpValue& q) {
        mpfr_sub(dx.re.get(), p.x.re.get(), q.x.re.get(), MPFR_RNDN);
        mpfr_sub(dx.im.get(), p.x.im.get(), q.x.im.get(), MPFR_RNDN);
        mpfr_sub(dy.re.get(), p.y.re.get(), q.y.re.get(), MPFR_RNDN);
        mpfr_sub(dy.im.get(), p.y.im.get(), q.y.im.get(), MPFR_RNDN);
        mp::div_into(lam, dy, dx, t1, t2, t3);
        // x3 = lam^2/4 - x1 - x2
        mp::mul_into(t, lam, lam, t1, t2);
        mpfr_div_2ui(t.re.get(), t.re.get(), 2, MPFR_RNDN);
        mpfr_div_2ui(t.im.get(), t.im.get(), 2, MPFR_RNDN);
        mpfr_sub(t.re.get(), t.re.get(), p.x.re.get(), MPFR_RNDN);
        mpfr_sub(t.im.get(), t.im.get(), p.x.im.get(), MPFR_RNDN);
        mpfr_sub(t.re.get(), t.re.get(), q.x.re.get(), MPFR_RNDN);
        mpfr_sub(t.im.get(), t.im.get(), q.x.im.get(), MPFR_RNDN);
        // y3 = -(y1 + lam (x3 - x1))
        mpfr_sub(dx.re.get(), t.re.get(), p.x.re.get(), MPFR_RNDN);
        mpfr_sub(dx.im.get(), t.im.get(), p.x.im.get(), MPFR_RNDN);
        mp::mul_into(dy, lam, dx, t1, t2);
        mpfr_add(dy.re.get(), dy.re.get(), p.y.re.get(), MPFR_RNDN);
        mpfr_add(dy.im.get(), dy.im.get(), p.y.im.get(), MPFR_RNDN);
        mpfr_neg(p.y.re.get(), dy.re.get(), MPFR_RNDN);
        mpfr_neg(p.y.im.get(), dy.im.get(), MPFR_RNDN);
        mpfr_swap(p.x.re.get(), t.re.get());
        mpfr_swap(p.x.im.get(), t.im.get());
    }
    Complex lam, dx, dy, t;
    Real t1, t2, t3;
};

Real x_distance(const WpValue& p, const WpValue& q) {
    Real d = (p.x - q.x).abs();
    Real s = p.x.abs();
    Real one(1L, s.prec());
    return d / (s > one ? s : one);
}

}  // namespace

WalkStats walk_division_rows(const PeriodData& period, long m, long b_lo, long b_hi, const DivisionVisitor& visit) {
    const auto& k = *period.kernel;
    const long P = k.prec;
    if (m < 2) throw UnsupportedModulus("division modulus must be at least 2");
    WalkStats st;
    st.max_residual = Real(P);
    st.max_drift = Real(P);

    const WpValue q0 = weierstrass_p(period, division_point(period, 1, 0, m));
    const Real close = mp::pow2(-(P / 4), P);
    ChordAdder adder(P);

    auto direct = [&](long a, long b) {
        ++st.anchors;
        return weierstrass_p(period, division_point(period, a, b, m));
    };
    auto note_residual = [&](const WpValue& v) {
        Real r = curve_residual(v);
        if (r > st.max_residual) st.max_residual = r;
    };
    auto note_drift = [&](const WpValue& walked, const WpValue& anchor) {
        Real d = x_distance(walked, anchor);
        if (d > st.max_drift) st.max_drift = d;
    };

    for (long b = b_lo; b <= b_hi; ++b) {
        long bm = ((b % m) + m) % m;
        long a0 = (bm == 0) ? 1 : 0;
        WpValue p = direct(a0, b);
        note_residual(p);
        visit(a0, b, p);
        long since = 0;
        for (long a = a0 + 1; a < m; ++a) {
            if (x_distance(p, q0) < close) {
                // P = +-Q0: the chord is undefined, evaluate directly
                p = direct(a, b);
                since = 0;
            } else {
                adder.add(p, q0);
                ++st.steps;
                ++since;
                if (since == kReanchorInterval || a == m - 1) {
                    WpValue d = direct(a, b);
                    note_drift(p, d);
                    p = std::move(d);
                    since = 0;
                }
            }
            note_residual(p);
            visit(a, b, p);
        }
    }
    return st;
}

const WpValue& DivisionValueTable::at(const EisensteinInteger& c) const {
    for (std::size_t i = 0; i < reps.size(); ++i) {
        if (reps[i] == c) return entries[i];
    }
    throw DomainError("no table entry for " + c.str());
}

DivisionValueTable wp_division_values(const PeriodData& period, long m, const SymmetricResidueSystem& sys) {
    if (sys.modulus != EisensteinInteger(m, 0))
        throw UnsupportedModulus("residue system modulus does not match " + std::to_string(m));
    if (m % 3 == 0) throw UnsupportedModulus("modulus must be coprime to 3");
    const long P = period.precision_bits;

    std::map<std::pair<long, long>, std::vector<std::size_t>> wanted;
    for (std::size_t i = 0; i < sys.reps.size(); ++i) {
        const auto& c = sys.reps[i];
        long a = static_cast<long>(((c.a() % m) + m) % m);
        long b = static_cast<long>(((c.b() % m) + m) % m);
        if (a == 0 && b == 0) throw LatticePointError("representative " + c.str() + " is 0 mod " + std::to_string(m));
        wanted[{b, a}].push_back(i);
    }
    std::set<long> rows;
    for (const auto& [key, _] : wanted) rows.insert(key.first);

    DivisionValueTable t;
    t.modulus = m;
    t.reps = sys.reps;
    t.entries.assign(sys.reps.size(), WpValue{Complex(P), Complex(P)});
    WalkStats total;
    total.max_residual = Real(P);
    total.max_drift = Real(P);
    for (long b : rows) {
        WalkStats st = walk_division_rows(period, m, b, b, [&](long a, long bb, const WpValue& v) {
            auto it = wanted.find({bb, a});
            if (it == wanted.end()) return;
            for (std::size_t i : it->second) t.entries[i] = v;
        });
        total.merge(st);
    }
    t.max_residual = total.max_residual;
    t.max_drift = total.max_drift;
    if (t.max_residual > mp::pow2(-(P / 2), P))
        throw PrecisionExhausted("division-value residual " + t.max_residual.str(6) + " exceeds 2^-" +
                                 std::to_string(P / 2) + "; raise the precision");
    return t;
}

}  // namespace cubicbsd
