#include "cubicbsd/mp.hpp"

#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace cubicbsd::mp {

Real::Real(const std::string& s, prec_t prec) {
    mpfr_init2(v_, prec);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
        mpfr_clear(v_);
        throw std::invalid_argument("not a decimal number: " + s);
    }
}

std::string Real::str(int digits) const {
    char* buf = nullptr;
    if (digits <= 0) digits = static_cast<int>(prec() * 0.30103) + 1;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

#define UNARY(name, fn)                       \
    Real name(const Real& x) {                \
        Real r(x.prec());                     \
        fn(r.get(), x.get(), MPFR_RNDN);      \
        return r;                             \
    }

UNARY(sqrt, mpfr_sqrt)
UNARY(cbrt, mpfr_cbrt)
UNARY(abs, mpfr_abs)
UNARY(exp, mpfr_exp)
UNARY(log, mpfr_log)
UNARY(gamma, mpfr_gamma)
#undef UNARY

Real floor(const Real& x) {
    Real r(x.prec());
    mpfr_floor(r.get(), x.get());
    return r;
}

Real round(const Real& x) {
    Real r(x.prec());
    mpfr_round(r.get(), x.get());
    return r;
}

Real pow(const Real& x, const Real& y) {
    Real r(maxp(x, y));
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}

Real agm(const Real& a, const Real& b) {
    Real r(maxp(a, b));
    mpfr_agm(r.get(), a.get(), b.get(), MPFR_RNDN);
    return r;
}

Real expint_e1(const Real& x) {
    // mpfr_eint at a negative argument returns -E1(-x)
    Real r(x.prec());
    Real nx = -x;
    mpfr_eint(r.get(), nx.get(), MPFR_RNDN);
    mpfr_neg(r.get(), r.get(), MPFR_RNDN);
    return r;
}

Real pi(prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

Real ldexp(const Real& x, long e) {
    Real r(x.prec());
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

Real pow2(long e, prec_t prec) {
    Real r(1L, prec);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}

long get_si(const Real& x) { return mpfr_get_si(x.get(), MPFR_RNDN); }

Real Complex::abs() const {
    Real r(prec());
    mpfr_hypot(r.get(), re.get(), im.get(), MPFR_RNDN);
    return r;
}

Complex operator*(const Complex& a, const Complex& b) {
    Complex out(a.prec() > b.prec() ? a.prec() : b.prec());
    Real t1(out.prec()), t2(out.prec());
    mul_into(out, a, b, t1, t2);
    return out;
}

Complex operator/(const Complex& a, const Complex& b) {
    Complex out(a.prec() > b.prec() ? a.prec() : b.prec());
    Real t1(out.prec()), t2(out.prec()), t3(out.prec());
    div_into(out, a, b, t1, t2, t3);
    return out;
}

Complex inverse(const Complex& a) {
    Real d = a.norm();
    return Complex(a.re / d, -a.im / d);
}

void mul_into(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2) {
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    mpfr_fma(out.im.get(), a.im.get(), b.re.get(), t2.get(), MPFR_RNDN);
    mpfr_swap(out.re.get(), t1.get());
}

void div_into(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2, Real& t3) {
    // (a.re + i a.im)(b.re - i b.im) / |b|^2
    mpfr_sqr(t3.get(), b.re.get(), MPFR_RNDN);
    mpfr_fma(t3.get(), b.im.get(), b.im.get(), t3.get(), MPFR_RNDN);
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_fma(t1.get(), a.im.get(), b.im.get(), t1.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_fms(t2.get(), a.re.get(), b.im.get(), t2.get(), MPFR_RNDN);
    mpfr_div(t1.get(), t1.get(), t3.get(), MPFR_RNDN);
    mpfr_div(out.im.get(), t2.get(), t3.get(), MPFR_RNDN);
    mpfr_neg(out.im.get(), out.im.get(), MPFR_RNDN);
    mpfr_swap(out.re.get(), t1.get());
}

}  // namespace cubicbsd::mp
