#ifndef SL2SPEC_QPOLY_HPP
#define SL2SPEC_QPOLY_HPP

#include <string>
#include <vector>

#include "sl2spec/rational.hpp"

namespace sl2spec {

// Univariate polynomial over Q, coefficients constant-term first.
class QPoly {
  public:
    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static QPoly constant(const Rat& a) { return QPoly({a}); }
    static QPoly x() { return QPoly({Rat(0), Rat(1)}); }
    static QPoly monomial(size_t deg, const Rat& a = Rat(1));

    bool is_zero() const { return c_.empty(); }
    // degree of 0 is -1 by convention here
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
    Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    QPoly operator+(const QPoly& o) const;
    QPoly operator-(const QPoly& o) const;
    QPoly operator*(const QPoly& o) const;
    QPoly operator*(const Rat& s) const;
    QPoly operator-() const { return *this * Rat(-1); }
    bool operator==(const QPoly& o) const { return c_ == o.c_; }

    // Division with remainder; pre: o != 0.
    std::pair<QPoly, QPoly> divrem(const QPoly& o) const;
    QPoly derivative() const;
    QPoly monic() const;
    QPoly gcd(const QPoly& o) const; // monic gcd
    Rat eval(const Rat& x) const;
    // substitute x -> s*x (scales the root locations by 1/s)
    QPoly scale_arg(const Rat& s) const;

    // Smallest positive integer m with m*this in Z[x].
    Int denominator_lcm() const;
    // True iff all coefficients are integers.
    bool is_integral() const;

    std::string str(const std::string& var = "t") const;

  private:
    std::vector<Rat> c_;
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

// Resultant of two polynomials with rational coefficients (exact, via
// Sylvester determinant after clearing denominators).
Rat resultant(const QPoly& f, const QPoly& g);

// n-th cyclotomic polynomial.
QPoly cyclotomic(unsigned long n);

} // namespace sl2spec

#endif
