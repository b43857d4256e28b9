#ifndef SL2SPEC_INTERVAL_HPP
#define SL2SPEC_INTERVAL_HPP

#include <mpfr.h>
#include <optional>
#include <string>

#include "sl2spec/rational.hpp"

namespace sl2spec {

// RAII wrapper around a single mpfr_t at a fixed precision.
class Real {
  public:
    explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(v_, 2); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string str(size_t digits = 0) const;

  private:
    mpfr_t v_;
};

// Closed interval [lo, hi] with outward-rounded arithmetic: every operation
// returns an interval containing the exact image of its operands.
class RealInterval {
  public:
    RealInterval() : RealInterval(128) {}
    explicit RealInterval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}
    RealInterval(const Rat& x, mpfr_prec_t prec);           // exact point, rounded out
    RealInterval(const Rat& lo, const Rat& hi, mpfr_prec_t prec);
    static RealInterval from_double(double x, mpfr_prec_t prec);
    static RealInterval exact_zero(mpfr_prec_t prec) { return RealInterval(prec); }
    static RealInterval pi(mpfr_prec_t prec);
    static RealInterval log_of(unsigned long n, mpfr_prec_t prec); // log n, n >= 1

    mpfr_prec_t prec() const { return lo_.prec(); }
    const Real& lo() const { return lo_; }
    const Real& hi() const { return hi_; }
    Real mid() const;
    Real rad() const;          // >= (hi-lo)/2, rounded up
    Real width() const;        // hi - lo, rounded up
    double mid_d() const { return mid().to_double(); }

    bool contains_zero() const;
    bool contains(const Rat& q) const;
    bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()); }
    bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
    bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
    bool certainly_less(const RealInterval& o) const { return mpfr_less_p(hi_.get(), o.lo_.get()); }
    bool overlaps(const RealInterval& o) const;
    // width <= 2^e ?
    bool width_below_pow2(long e) const;

    RealInterval operator-() const;
    RealInterval operator+(const RealInterval& o) const;
    RealInterval operator-(const RealInterval& o) const;
    RealInterval operator*(const RealInterval& o) const;
    RealInterval operator/(const RealInterval& o) const; // pre: o excludes 0
    RealInterval scaled_2exp(long e) const;

    RealInterval abs() const;
    RealInterval square() const;
    RealInterval sqrt() const;   // pre: lo >= 0 (clamped at 0 if slightly below and hi >= 0)
    RealInterval log() const;    // pre: lo > 0
    RealInterval exp() const;
    RealInterval acosh() const;  // pre: hi >= 1 (lo clamped to 1)
    RealInterval pow_int(long e) const;

    RealInterval hull(const RealInterval& o) const;

    // Exact dyadic endpoints as rationals (mpfr values are dyadic).
    Rat lo_rat() const;
    Rat hi_rat() const;

    std::string str(size_t digits = 12) const;
    std::string mid_str(size_t digits = 20) const;
    std::string rad_str() const;

    static RealInterval make(Real lo, Real hi);

  private:
    Real lo_, hi_;
    void check() const;
};

RealInterval atan2_interval(const RealInterval& y, const RealInterval& x);

// Axis-aligned rectangle in C with outward-rounded arithmetic.
class ComplexInterval {
  public:
    ComplexInterval() = default;
    explicit ComplexInterval(mpfr_prec_t prec) : re_(prec), im_(prec) {}
    ComplexInterval(RealInterval re, RealInterval im) : re_(std::move(re)), im_(std::move(im)) {}
    ComplexInterval(const Rat& re, const Rat& im, mpfr_prec_t prec)
        : re_(re, prec), im_(im, prec) {}

    const RealInterval& re() const { return re_; }
    const RealInterval& im() const { return im_; }
    mpfr_prec_t prec() const { return re_.prec(); }

    ComplexInterval operator+(const ComplexInterval& o) const;
    ComplexInterval operator-(const ComplexInterval& o) const;
    ComplexInterval operator*(const ComplexInterval& o) const;
    ComplexInterval operator/(const ComplexInterval& o) const; // pre: |o|^2 excludes 0
    ComplexInterval operator-() const { return {-re_, -im_}; }
    ComplexInterval conj() const { return {re_, -im_}; }
    ComplexInterval scaled(const RealInterval& s) const { return {re_ * s, im_ * s}; }

    RealInterval norm2() const { return re_.square() + im_.square(); }
    RealInterval abs() const { return norm2().sqrt(); }
    RealInterval log_abs() const { return norm2().log().scaled_2exp(-1); }
    // pre: rectangle excludes origin and the closed negative real axis,
    // or lies in an open half plane im>0 / im<0.
    RealInterval arg() const;

    bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
    bool overlaps(const ComplexInterval& o) const {
        return re_.overlaps(o.re()) && im_.overlaps(o.im());
    }
    // max(width(re), width(im)) <= 2^e
    bool width_below_pow2(long e) const {
        return re_.width_below_pow2(e) && im_.width_below_pow2(e);
    }

    // Principal-ish square root: the returned pair (+r, -r) covers both roots;
    // caller picks a branch. pre: rectangle excludes 0.
    ComplexInterval sqrt_principal() const;

    std::string str(size_t digits = 12) const;

  private:
    RealInterval re_, im_;
};

} // namespace sl2spec

#endif
