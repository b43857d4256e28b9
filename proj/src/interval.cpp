#include "sl2spec/interval.hpp"
#include "sl2spec/errors.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace sl2spec {

std::string Real::str(size_t digits) const {
    if (mpfr_zero_p(v_)) return "0";
    char* s = nullptr;
    if (digits == 0) digits = static_cast<size_t>(prec() * 0.3010) + 2;
    int n = mpfr_asprintf(&s, "%.*Re", static_cast<int>(digits), v_);
    std::string out = n >= 0 ? s : "?";
    mpfr_free_str(s);
    return out;
}

RealInterval::RealInterval(const Rat& x, mpfr_prec_t prec) : lo_(prec), hi_(prec) {
    mpfr_set_q(lo_.get(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_.get(), x.get_mpq_t(), MPFR_RNDU);
}

RealInterval::RealInterval(const Rat& lo, const Rat& hi, mpfr_prec_t prec)
    : lo_(prec), hi_(prec) {
    mpfr_set_q(lo_.get(), lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_.get(), hi.get_mpq_t(), MPFR_RNDU);
    check();
}

RealInterval RealInterval::from_double(double x, mpfr_prec_t prec) {
    RealInterval r(prec);
    mpfr_set_d(r.lo_.get(), x, MPFR_RNDD);
    mpfr_set_d(r.hi_.get(), x, MPFR_RNDU);
    return r;
}

RealInterval RealInterval::pi(mpfr_prec_t prec) {
    RealInterval r(prec);
    mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
    mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::log_of(unsigned long n, mpfr_prec_t prec) {
    RealInterval r(prec);
    mpfr_set_ui(r.lo_.get(), n, MPFR_RNDD);
    mpfr_set_ui(r.hi_.get(), n, MPFR_RNDU);
    mpfr_log(r.lo_.get(), r.lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), r.hi_.get(), MPFR_RNDU);
    return r;
}

void RealInterval::check() const {
    if (mpfr_greater_p(lo_.get(), hi_.get()))
        throw Error("interval endpoints out of order");
}

RealInterval RealInterval::make(Real lo, Real hi) {
    RealInterval r(std::max(lo.prec(), hi.prec()));
    r.lo_ = std::move(lo);
    r.hi_ = std::move(hi);
    r.check();
    return r;
}

Real RealInterval::mid() const {
    Real m(prec() + 1);
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    return m;
}

Real RealInterval::rad() const {
    Real r(prec());
    mpfr_sub(r.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    mpfr_div_2ui(r.get(), r.get(), 1, MPFR_RNDU);
    // account for midpoint rounding
    mpfr_nextabove(r.get());
    return r;
}

Real RealInterval::width() const {
    Real r(prec());
    mpfr_sub(r.get(), hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
}

bool RealInterval::contains_zero() const {
    return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0;
}

bool RealInterval::contains(const Rat& q) const {
    return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 &&
           mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
}

bool RealInterval::overlaps(const RealInterval& o) const {
    return !certainly_less(o) && !o.certainly_less(*this);
}

bool RealInterval::width_below_pow2(long e) const {
    Real w = width();
    if (mpfr_zero_p(w.get())) return true;
    Real bound(prec());
    mpfr_set_ui_2exp(bound.get(), 1, e, MPFR_RNDD);
    return mpfr_less_p(w.get(), bound.get());
}

RealInterval RealInterval::operator-() const {
    RealInterval r(prec());
    mpfr_neg(r.lo_.get(), hi_.get(), MPFR_RNDD);
    mpfr_neg(r.hi_.get(), lo_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::operator+(const RealInterval& o) const {
    RealInterval r(std::max(prec(), o.prec()));
    mpfr_add(r.lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_add(r.hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::operator-(const RealInterval& o) const {
    RealInterval r(std::max(prec(), o.prec()));
    mpfr_sub(r.lo_.get(), lo_.get(), o.hi_.get(), MPFR_RNDD);
    mpfr_sub(r.hi_.get(), hi_.get(), o.lo_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::operator*(const RealInterval& o) const {
    mpfr_prec_t p = std::max(prec(), o.prec());
    RealInterval r(p);
    Real t(p);
    std::array<mpfr_srcptr, 2> a = {lo_.get(), hi_.get()};
    std::array<mpfr_srcptr, 2> b = {o.lo_.get(), o.hi_.get()};
    bool first = true;
    for (auto x : a)
        for (auto y : b) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return r;
}

RealInterval RealInterval::operator/(const RealInterval& o) const {
    if (o.contains_zero()) throw Error("interval division by interval containing zero");
    mpfr_prec_t p = std::max(prec(), o.prec());
    RealInterval r(p);
    Real t(p);
    std::array<mpfr_srcptr, 2> a = {lo_.get(), hi_.get()};
    std::array<mpfr_srcptr, 2> b = {o.lo_.get(), o.hi_.get()};
    bool first = true;
    for (auto x : a)
        for (auto y : b) {
            mpfr_div(t.get(), x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), r.lo_.get())) mpfr_set(r.lo_.get(), t.get(), MPFR_RNDD);
            mpfr_div(t.get(), x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), r.hi_.get())) mpfr_set(r.hi_.get(), t.get(), MPFR_RNDU);
            first = false;
        }
    return r;
}

RealInterval RealInterval::scaled_2exp(long e) const {
    RealInterval r(prec());
    mpfr_mul_2si(r.lo_.get(), lo_.get(), e, MPFR_RNDD);
    mpfr_mul_2si(r.hi_.get(), hi_.get(), e, MPFR_RNDU);
    return r;
}

RealInterval RealInterval::abs() const {
    RealInterval r(prec());
    if (mpfr_sgn(lo_.get()) >= 0) return *this;
    if (mpfr_sgn(hi_.get()) <= 0) return -*this;
    mpfr_set_zero(r.lo_.get(), 1);
    Real nl(prec());
    mpfr_neg(nl.get(), lo_.get(), MPFR_RNDU);
    if (mpfr_greater_p(nl.get(), hi_.get()))
        mpfr_set(r.hi_.get(), nl.get(), MPFR_RNDU);
    else
        mpfr_set(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::square() const {
    RealInterval a = abs();
    RealInterval r(prec());
    mpfr_sqr(r.lo_.get(), a.lo_.get(), MPFR_RNDD);
    mpfr_sqr(r.hi_.get(), a.hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::sqrt() const {
    RealInterval r(prec());
    if (mpfr_sgn(hi_.get()) < 0) throw Error("sqrt of negative interval");
    if (mpfr_sgn(lo_.get()) < 0)
        mpfr_set_zero(r.lo_.get(), 1); // clamp: exact value is >= 0
    else
        mpfr_sqrt(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_sqrt(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::log() const {
    if (mpfr_sgn(lo_.get()) <= 0) throw Error("log of interval touching 0");
    RealInterval r(prec());
    mpfr_log(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_log(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::exp() const {
    RealInterval r(prec());
    mpfr_exp(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_exp(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::acosh() const {
    if (mpfr_cmp_ui(hi_.get(), 1) < 0) throw Error("acosh of interval below 1");
    RealInterval r(prec());
    if (mpfr_cmp_ui(lo_.get(), 1) <= 0)
        mpfr_set_zero(r.lo_.get(), 1);
    else
        mpfr_acosh(r.lo_.get(), lo_.get(), MPFR_RNDD);
    mpfr_acosh(r.hi_.get(), hi_.get(), MPFR_RNDU);
    return r;
}

RealInterval RealInterval::pow_int(long e) const {
    if (e == 0) return RealInterval(Rat(1), prec());
    RealInterval base = *this;
    if (e < 0) base = RealInterval(Rat(1), prec()) / base;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    RealInterval acc(Rat(1), prec());
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

RealInterval RealInterval::hull(const RealInterval& o) const {
    RealInterval r(std::max(prec(), o.prec()));
    mpfr_min(r.lo_.get(), lo_.get(), o.lo_.get(), MPFR_RNDD);
    mpfr_max(r.hi_.get(), hi_.get(), o.hi_.get(), MPFR_RNDU);
    return r;
}

Rat RealInterval::lo_rat() const {
    mpq_class q;
    if (!mpfr_number_p(lo_.get())) throw Error("non-finite interval endpoint");
    mpfr_get_q(q.get_mpq_t(), lo_.get());
    return q;
}

Rat RealInterval::hi_rat() const {
    mpq_class q;
    if (!mpfr_number_p(hi_.get())) throw Error("non-finite interval endpoint");
    mpfr_get_q(q.get_mpq_t(), hi_.get());
    return q;
}

std::string RealInterval::str(size_t digits) const {
    return "[" + lo_.str(digits) + ", " + hi_.str(digits) + "]";
}

std::string RealInterval::mid_str(size_t digits) const { return mid().str(digits); }

std::string RealInterval::rad_str() const { return rad().str(3); }

RealInterval atan2_interval(const RealInterval& y, const RealInterval& x) {
    // Valid when the rectangle avoids the closed negative real axis; then
    // atan2 is continuous on the box and monotone along edges, so the hull
    // of the corner values contains the range.
    bool off_cut = y.certainly_positive() || y.certainly_negative() || x.certainly_positive();
    if (!off_cut) throw PrecisionExhausted("arg of rectangle meeting the branch cut");
    mpfr_prec_t p = std::max(x.prec(), y.prec());
    RealInterval r(p);
    Real t(p);
    bool first = true;
    std::array<mpfr_srcptr, 2> ys = {y.lo().get(), y.hi().get()};
    std::array<mpfr_srcptr, 2> xs = {x.lo().get(), x.hi().get()};
    Real rlo(p), rhi(p);
    for (auto yy : ys)
        for (auto xx : xs) {
            mpfr_atan2(t.get(), yy, xx, MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), rlo.get())) rlo = t;
            mpfr_atan2(t.get(), yy, xx, MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), rhi.get())) rhi = t;
            first = false;
        }
    return RealInterval::make(rlo, rhi);
}

ComplexInterval ComplexInterval::operator+(const ComplexInterval& o) const {
    return {re_ + o.re_, im_ + o.im_};
}

ComplexInterval ComplexInterval::operator-(const ComplexInterval& o) const {
    return {re_ - o.re_, im_ - o.im_};
}

ComplexInterval ComplexInterval::operator*(const ComplexInterval& o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
}

ComplexInterval ComplexInterval::operator/(const ComplexInterval& o) const {
    RealInterval n2 = o.norm2();
    if (n2.contains_zero()) throw Error("complex interval division by box containing zero");
    ComplexInterval num = *this * o.conj();
    return {num.re_ / n2, num.im_ / n2};
}

RealInterval ComplexInterval::arg() const { return atan2_interval(im_, re_); }

ComplexInterval ComplexInterval::sqrt_principal() const {
    // sqrt via the half-angle identities, picking the formula whose
    // denominator stays away from zero on this rectangle:
    //   u = sqrt((|z|+re)/2), v = sqrt((|z|-re)/2)
    //   sqrt(z) = u + i*im/(2u)        (valid off the negative real axis)
    //   sqrt(z) = |im|/(2v)*? ...      (valid off the positive real axis)
    // We require the rectangle to avoid zero and to be sign-definite enough
    // for one of the two variants.
    RealInterval a = abs();
    mpfr_prec_t p = prec();
    RealInterval half(Rat(1, 2), p);
    if (re_.certainly_positive() || im_.certainly_positive() || im_.certainly_negative()) {
        RealInterval u2 = (a + re_) * half;
        if (u2.certainly_positive()) {
            RealInterval u = u2.sqrt();
            RealInterval v = im_ / (u + u);
            ComplexInterval r(u, v);
            if (im_.certainly_negative() || (im_.contains_zero() && re_.certainly_positive()) ||
                im_.certainly_positive())
                return r;
        }
        // fall through to the other variant
    }
    if (im_.certainly_positive() || im_.certainly_negative() || re_.certainly_negative()) {
        RealInterval v2 = (a - re_) * half;
        if (v2.certainly_positive()) {
            RealInterval v = v2.sqrt();
            RealInterval u = im_.abs() / (v + v);
            // sign of imaginary part of sqrt follows sign of im; for
            // re < 0 and im straddling 0 the branch is ambiguous.
            if (im_.certainly_positive()) return ComplexInterval(u, v);
            if (im_.certainly_negative()) return ComplexInterval(u, -v);
        }
    }
    throw PrecisionExhausted("complex sqrt: rectangle cannot be separated from the branch cut");
}

std::string ComplexInterval::str(size_t digits) const {
    return re_.str(digits) + " + i*" + im_.str(digits);
}

} // namespace sl2spec
