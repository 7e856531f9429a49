#pragma once
// Thin RAII layer over MPFR. Every Real owns its precision; binary operators
// produce a result at the larger of the two operand precisions.

#include <mpfr.h>

#include <string>
#include <utility>

namespace cubicbsd::mp {

using prec_t = mpfr_prec_t;

class Real {
public:
    explicit Real(prec_t prec = 53) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(double x, prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(long x, prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x, prec_t prec) : Real(static_cast<long>(x), prec) {}
    Real(const std::string& s, prec_t prec);
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        // steal the limbs; leave the source as a valid zero-limb husk
        v_[0] = o.v_[0];
        o.v_[0]._mpfr_d = nullptr;
    }
    ~Real() {
        if (v_[0]._mpfr_d) mpfr_clear(v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            if (!v_[0]._mpfr_d) mpfr_init2(v_, mpfr_get_prec(o.v_));
            else if (mpfr_get_prec(v_) < mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        std::swap(v_[0], o.v_[0]);
        return *this;
    }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    prec_t prec() const { return mpfr_get_prec(v_); }
    Real at(prec_t p) const {
        Real r(p);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
    std::string str(int digits = 0) const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(long k) { mpfr_mul_si(v_, v_, k, MPFR_RNDN); return *this; }
    Real& operator/=(long k) { mpfr_div_si(v_, v_, k, MPFR_RNDN); return *this; }

private:
    mpfr_t v_;
};

inline prec_t maxp(const Real& a, const Real& b) { return a.prec() > b.prec() ? a.prec() : b.prec(); }

inline Real operator+(const Real& a, const Real& b) { Real r(maxp(a, b)); mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real operator-(const Real& a, const Real& b) { Real r(maxp(a, b)); mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real operator*(const Real& a, const Real& b) { Real r(maxp(a, b)); mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real operator/(const Real& a, const Real& b) { Real r(maxp(a, b)); mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN); return r; }
inline Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.get(), a.get(), MPFR_RNDN); return r; }
inline Real operator*(const Real& a, long k) { Real r(a.prec()); mpfr_mul_si(r.get(), a.get(), k, MPFR_RNDN); return r; }
inline Real operator*(long k, const Real& a) { return a * k; }
inline Real operator/(const Real& a, long k) { Real r(a.prec()); mpfr_div_si(r.get(), a.get(), k, MPFR_RNDN); return r; }
inline Real operator+(const Real& a, long k) { Real r(a.prec()); mpfr_add_si(r.get(), a.get(), k, MPFR_RNDN); return r; }
inline Real operator-(const Real& a, long k) { Real r(a.prec()); mpfr_sub_si(r.get(), a.get(), k, MPFR_RNDN); return r; }

inline bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()); }
inline bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()); }
inline bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()); }
inline bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()); }
inline bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()); }

Real sqrt(const Real& x);
Real cbrt(const Real& x);
Real abs(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real pow(const Real& x, const Real& y);
Real floor(const Real& x);
Real round(const Real& x);  // ties away from zero
Real gamma(const Real& x);
Real agm(const Real& a, const Real& b);
Real expint_e1(const Real& x);  // E1(x) for x > 0
Real pi(prec_t prec);
Real ldexp(const Real& x, long e);
// 2^e at the given precision
Real pow2(long e, prec_t prec);
long get_si(const Real& x);

class Complex {
public:
    explicit Complex(prec_t prec = 53) : re(prec), im(prec) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    explicit Complex(Real r) : re(std::move(r)), im(re.prec()) {}

    prec_t prec() const { return re.prec(); }
    Complex conj() const { return Complex(re, -im); }
    Real norm() const { return re * re + im * im; }
    Real abs() const;

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }

    Real re, im;
};

inline Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
inline Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
inline Complex operator-(const Complex& a) { return Complex(-a.re, -a.im); }
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
inline Complex operator*(const Complex& a, const Real& s) { return Complex(a.re * s, a.im * s); }
inline Complex operator*(const Real& s, const Complex& a) { return a * s; }
inline Complex operator/(const Complex& a, const Real& s) { return Complex(a.re / s, a.im / s); }
inline Complex operator*(const Complex& a, long k) { return Complex(a.re * k, a.im * k); }
inline Complex operator/(const Complex& a, long k) { return Complex(a.re / k, a.im / k); }
Complex inverse(const Complex& a);

// In-place kernels for the hot group-law loop; out may alias inputs.
void mul_into(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2);
void div_into(Complex& out, const Complex& a, const Complex& b, Real& t1, Real& t2, Real& t3);

}  // namespace cubicbsd::mp
