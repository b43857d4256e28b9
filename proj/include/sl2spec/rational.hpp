#ifndef SL2SPEC_RATIONAL_HPP
#define SL2SPEC_RATIONAL_HPP

#include <gmpxx.h>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sl2spec {

using Int = mpz_class;
using Rat = mpq_class;

// Parses "p/q" or "p" (decimal digits, optional sign). Throws ConfigError on junk.
Rat parse_rational(const std::string& s);

inline std::string to_string(const Rat& q) { return q.get_str(); }
inline std::string to_string(const Int& z) { return z.get_str(); }

inline Int pow_int(Int base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rat pow_rat(const Rat& base, long e); // e may be negative for nonzero base

// Exact square root of a nonnegative integer, if it is a perfect square.
std::optional<Int> sqrt_exact(const Int& n);
std::optional<Rat> sqrt_exact(const Rat& q);

bool is_probable_prime(const Int& n);

// Prime factorization by trial division + Pollard rho (Brent variant).
// Deterministic. Suitable for the desk-scale integers this project meets.
std::map<Int, unsigned long> factor_integer(Int n); // pre: n > 0

// v_p(n) for n != 0.
unsigned long valuation_at(const Int& p, Int n);
long valuation_at(const Int& p, const Rat& q); // may be negative

// Euler phi for small n.
unsigned long euler_phi(unsigned long n);

// All n >= 1 with euler_phi(n) <= bound, ascending.
std::vector<unsigned long> phi_bounded_orders(unsigned long bound);

// m = s^2 * squarefree(m); returns (squarefree part, s). pre: m != 0.
std::pair<Int, Int> squarefree_decompose(const Int& m);

} // namespace sl2spec

#endif
