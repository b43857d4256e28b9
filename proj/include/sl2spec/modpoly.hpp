#ifndef SL2SPEC_MODPOLY_HPP
#define SL2SPEC_MODPOLY_HPP

#include <vector>

#include "sl2spec/qpoly.hpp"
#include "sl2spec/rational.hpp"

namespace sl2spec {

// Polynomial with coefficients in Z/m, constant-term first, normalized to
// representatives in [0, m). m is a prime for the factorization routines and
// a prime power for Hensel-lifted data.
class ModPoly {
  public:
    ModPoly() = default;
    ModPoly(std::vector<Int> coeffs, Int modulus);
    static ModPoly from_qpoly(const QPoly& f, const Int& m); // pre: denominators invertible mod m
    static ModPoly x(const Int& m) { return ModPoly({Int(0), Int(1)}, m); }
    static ModPoly constant(Int a, const Int& m) { return ModPoly({std::move(a)}, m); }

    const Int& modulus() const { return m_; }
    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    Int coeff(size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
    Int leading() const { return c_.empty() ? Int(0) : c_.back(); }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    ModPoly operator+(const ModPoly& o) const;
    ModPoly operator-(const ModPoly& o) const;
    ModPoly operator*(const ModPoly& o) const;
    ModPoly scaled(const Int& s) const;
    bool operator==(const ModPoly& o) const { return m_ == o.m_ && c_ == o.c_; }

    // Division with remainder; pre: leading coefficient of o invertible mod m.
    std::pair<ModPoly, ModPoly> divrem(const ModPoly& o) const;
    ModPoly mod(const ModPoly& o) const { return divrem(o).second; }
    ModPoly monic() const; // pre: leading invertible
    ModPoly derivative() const;
    ModPoly pow_mod(Int e, const ModPoly& modp) const;
    ModPoly gcd(const ModPoly& o) const; // pre: m prime
    // extended gcd (m prime): g = a*u + b*v
    static ModPoly ext_gcd(const ModPoly& a, const ModPoly& b, ModPoly& u, ModPoly& v);

    Int eval(const Int& x) const;
    QPoly to_qpoly() const; // lifts representatives in [0, m)
    // representative with coefficients in (-m/2, m/2]
    QPoly to_qpoly_centered() const;

  private:
    std::vector<Int> c_;
    Int m_;
    void trim();
};

// Irreducible factorization mod p via squarefree/distinct-degree/Cantor-
// Zassenhaus. Deterministically seeded. pre: p prime, f nonzero.
// Returns (irreducible monic factor, multiplicity), sorted.
std::vector<std::pair<ModPoly, unsigned long>> factor_mod_p(const ModPoly& f);

// Given monic f over Z and a coprime factorization f = prod h_i (mod p)
// (the h_i pairwise coprime mod p but not necessarily irreducible), lift to
// f = prod H_i (mod p^k). Returns lifted monic factors.
std::vector<ModPoly> hensel_lift_coprime(const QPoly& f, const std::vector<ModPoly>& factors,
                                         const Int& p, unsigned long k);

} // namespace sl2spec

#endif
