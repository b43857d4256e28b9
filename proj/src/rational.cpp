#include "sl2spec/rational.hpp"
#include "sl2spec/errors.hpp"

#include <algorithm>
#include <cctype>

namespace sl2spec {

Rat parse_rational(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw ConfigError("empty rational literal");
    auto ok = [](const std::string& u) {
        if (u.empty()) return false;
        size_t i = (u[0] == '+' || u[0] == '-') ? 1 : 0;
        if (i == u.size()) return false;
        for (; i < u.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(u[i]))) return false;
        return true;
    };
    size_t slash = t.find('/');
    if (slash == std::string::npos) {
        if (!ok(t)) throw ConfigError("bad rational literal '" + s + "'");
        return Rat(Int(t));
    }
    std::string num = t.substr(0, slash), den = t.substr(slash + 1);
    if (!ok(num) || !ok(den)) throw ConfigError("bad rational literal '" + s + "'");
    Int d(den);
    if (d == 0) throw ConfigError("zero denominator in '" + s + "'");
    Rat q(Int(num), d);
    q.canonicalize();
    return q;
}

Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0) {
        if (e < 0) throw DivisionByZero();
        return Rat(0);
    }
    Rat b = e > 0 ? base : Rat(1) / base;
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    Rat r(1);
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

std::optional<Int> sqrt_exact(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return std::nullopt;
    return r;
}

std::optional<Rat> sqrt_exact(const Rat& q) {
    if (q < 0) return std::nullopt;
    auto num = sqrt_exact(Int(q.get_num()));
    if (!num) return std::nullopt;
    auto den = sqrt_exact(Int(q.get_den()));
    if (!den) return std::nullopt;
    return Rat(*num, *den);
}

bool is_probable_prime(const Int& n) {
    // 40 Miller-Rabin rounds via GMP; deterministic verdict for primes,
    // astronomically safe for composites at this size.
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

Int pollard_rho(const Int& n) {
    // Brent's cycle finding; n odd composite, not a prime power of small prime.
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1, saved = 2;
        unsigned long power = 1, lam = 0;
        auto step = [&](Int v) { return Int((v * v + c) % n); };
        while (d == 1) {
            if (lam == power) {
                saved = y;
                power *= 2;
                lam = 0;
            }
            y = step(y);
            ++lam;
            Int diff = y - saved;
            if (diff == 0) break; // cycle without factor; retry with new c
            diff = abs(diff);
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
        (void)x;
    }
}

void factor_rec(Int n, std::map<Int, unsigned long>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    // perfect power?
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2; k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::map<Int, unsigned long> sub;
                factor_rec(root, sub);
                for (auto& [p, e] : sub) out[p] += e * k;
                return;
            }
        }
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

std::map<Int, unsigned long> factor_integer(Int n) {
    if (n <= 0) throw Error("factor_integer: argument must be positive");
    std::map<Int, unsigned long> out;
    for (Int p : {Int(2), Int(3), Int(5), Int(7), Int(11), Int(13)}) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    for (unsigned long p = 17; p < 100000 && n > 1; p += 2) {
        if (!is_probable_prime(Int(p)) && p % 2) {
            // trial division by odd numbers is fine; primality screen only
            // avoids redundant gcds
        }
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++out[Int(p)];
            n /= p;
        }
    }
    if (n > 1) factor_rec(n, out);
    return out;
}

unsigned long valuation_at(const Int& p, Int n) {
    if (n == 0) throw Error("valuation of zero");
    n = abs(n);
    unsigned long v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

long valuation_at(const Int& p, const Rat& q) {
    if (q == 0) throw Error("valuation of zero");
    return static_cast<long>(valuation_at(p, Int(q.get_num()))) -
           static_cast<long>(valuation_at(p, Int(q.get_den())));
}

unsigned long euler_phi(unsigned long n) {
    unsigned long r = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            r -= r / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) r -= r / n;
    return r;
}

std::vector<unsigned long> phi_bounded_orders(unsigned long bound) {
    // phi(n) >= sqrt(n/2), so n <= 2*(bound^2+1) is a safe cutoff.
    std::vector<unsigned long> out;
    for (unsigned long n = 1; n <= 2 * bound * bound + 2; ++n)
        if (euler_phi(n) <= bound) out.push_back(n);
    return out;
}

std::pair<Int, Int> squarefree_decompose(const Int& m) {
    if (m == 0) throw Error("squarefree_decompose(0)");
    auto f = factor_integer(abs(m));
    Int core = m < 0 ? -1 : 1, s = 1;
    for (auto& [p, e] : f) {
        if (e % 2) core *= p;
        s *= pow_int(p, e / 2);
    }
    return {core, s};
}

} // namespace sl2spec
