#include "sl2spec/modpoly.hpp"
#include "sl2spec/errors.hpp"

#include <algorithm>
#include <random>

namespace sl2spec {

namespace {

Int mod_reduce(Int a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw Error("non-invertible element mod m");
    return r;
}

} // namespace

void ModPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

ModPoly::ModPoly(std::vector<Int> coeffs, Int modulus) : c_(std::move(coeffs)), m_(std::move(modulus)) {
    for (auto& a : c_) a = mod_reduce(a, m_);
    trim();
}

ModPoly ModPoly::from_qpoly(const QPoly& f, const Int& m) {
    std::vector<Int> c(f.coeffs().size());
    for (size_t i = 0; i < c.size(); ++i) {
        const Rat& q = f.coeff(i);
        Int den = mod_reduce(Int(q.get_den()), m);
        c[i] = mod_reduce(Int(q.get_num()) * mod_inverse(den, m), m);
    }
    return ModPoly(std::move(c), m);
}

ModPoly ModPoly::operator+(const ModPoly& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return ModPoly(std::move(r), m_);
}

ModPoly ModPoly::operator-(const ModPoly& o) const {
    std::vector<Int> r(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return ModPoly(std::move(r), m_);
}

ModPoly ModPoly::operator*(const ModPoly& o) const {
    if (is_zero() || o.is_zero()) return ModPoly({}, m_);
    std::vector<Int> r(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return ModPoly(std::move(r), m_);
}

ModPoly ModPoly::scaled(const Int& s) const {
    std::vector<Int> r(c_);
    for (auto& a : r) a *= s;
    return ModPoly(std::move(r), m_);
}

std::pair<ModPoly, ModPoly> ModPoly::divrem(const ModPoly& o) const {
    if (o.is_zero()) throw DivisionByZero();
    Int linv = mod_inverse(o.leading(), m_);
    std::vector<Int> rem(c_);
    long dr = degree(), dn = o.degree();
    if (dr < dn) return {ModPoly({}, m_), *this};
    std::vector<Int> q(dr - dn + 1);
    for (long i = dr; i >= dn; --i) {
        Int cur = mod_reduce(rem[i], m_);
        if (cur == 0) continue;
        Int f = mod_reduce(cur * linv, m_);
        q[i - dn] = f;
        for (long j = 0; j <= dn; ++j) rem[i - dn + j] -= f * o.c_[j];
        rem[i] = 0;
    }
    return {ModPoly(std::move(q), m_), ModPoly(std::move(rem), m_)};
}

ModPoly ModPoly::monic() const {
    if (is_zero() || is_monic()) return *this;
    return scaled(mod_inverse(leading(), m_));
}

ModPoly ModPoly::derivative() const {
    if (c_.size() <= 1) return ModPoly({}, m_);
    std::vector<Int> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Int(static_cast<long>(i));
    return ModPoly(std::move(r), m_);
}

ModPoly ModPoly::pow_mod(Int e, const ModPoly& modp) const {
    ModPoly base = mod(modp);
    ModPoly acc = ModPoly::constant(Int(1), m_);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = (acc * base).mod(modp);
        base = (base * base).mod(modp);
        e >>= 1;
    }
    return acc;
}

ModPoly ModPoly::gcd(const ModPoly& o) const {
    ModPoly a = *this, b = o;
    while (!b.is_zero()) {
        ModPoly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

ModPoly ModPoly::ext_gcd(const ModPoly& a, const ModPoly& b, ModPoly& u, ModPoly& v) {
    const Int& m = a.modulus();
    ModPoly r0 = a, r1 = b;
    ModPoly s0 = ModPoly::constant(Int(1), m), s1 = ModPoly({}, m);
    ModPoly t0 = ModPoly({}, m), t1 = ModPoly::constant(Int(1), m);
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divrem(r1);
        ModPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    Int linv = mod_inverse(r0.leading(), m);
    u = s0.scaled(linv);
    v = t0.scaled(linv);
    return r0.scaled(linv);
}

Int ModPoly::eval(const Int& x) const {
    Int r = 0;
    for (size_t i = c_.size(); i-- > 0;) r = mod_reduce(r * x + c_[i], m_);
    return r;
}

QPoly ModPoly::to_qpoly() const {
    std::vector<Rat> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = Rat(c_[i]);
    return QPoly(std::move(r));
}

QPoly ModPoly::to_qpoly_centered() const {
    std::vector<Rat> r(c_.size());
    Int half = m_ / 2;
    for (size_t i = 0; i < c_.size(); ++i)
        r[i] = Rat(c_[i] > half ? Int(c_[i] - m_) : c_[i]);
    return QPoly(std::move(r));
}

namespace {

// Equal-degree splitting (Cantor-Zassenhaus), f squarefree monic, all
// irreducible factors of degree d. Deterministically seeded RNG.
void edf(const ModPoly& f, long d, std::vector<ModPoly>& out, std::mt19937_64& rng) {
    const Int& p = f.modulus();
    if (f.degree() == d) {
        out.push_back(f.monic());
        return;
    }
    long n = f.degree();
    ModPoly splitter({}, p);
    while (true) {
        std::vector<Int> rc(static_cast<size_t>(n));
        for (auto& a : rc) {
            unsigned long r = rng();
            a = mod_reduce(Int(r), p);
        }
        ModPoly v(std::move(rc), p);
        if (v.degree() < 1) continue;
        ModPoly g = f.gcd(v);
        if (g.degree() > 0 && g.degree() < n) {
            splitter = g;
            break;
        }
        if (p == 2) {
            // trace map: v + v^2 + v^4 + ... over F_{2^d}
            ModPoly t = v, acc = v;
            for (long i = 1; i < d; ++i) {
                t = (t * t).mod(f);
                acc = acc + t;
            }
            g = f.gcd(acc);
        } else {
            Int e = (pow_int(p, static_cast<unsigned long>(d)) - 1) / 2;
            ModPoly w = v.pow_mod(e, f) - ModPoly::constant(Int(1), p);
            g = f.gcd(w);
        }
        if (g.degree() > 0 && g.degree() < n) {
            splitter = g;
            break;
        }
    }
    edf(splitter, d, out, rng);
    edf(f.divrem(splitter).first, d, out, rng);
}

} // namespace

std::vector<std::pair<ModPoly, unsigned long>> factor_mod_p(const ModPoly& f0) {
    const Int& p = f0.modulus();
    ModPoly f = f0.monic();
    std::vector<std::pair<ModPoly, unsigned long>> result;
    // deterministic seed from p and the polynomial
    uint64_t seed = 0x9e3779b97f4a7c15ull ^ mpz_get_ui(p.get_mpz_t());
    for (const Int& c : f.coeffs()) seed = seed * 1099511628211ull + mpz_get_ui(c.get_mpz_t());
    std::mt19937_64 rng(seed);

    // squarefree decomposition: peel multiplicities by repeated gcd with f'.
    // Over F_p this needs the p-th power trick when f' = 0.
    struct Item { ModPoly poly; unsigned long mult; };
    std::vector<Item> stack{{f, 1}};
    std::vector<Item> squarefree_parts;
    while (!stack.empty()) {
        auto [g, mult] = stack.back();
        stack.pop_back();
        if (g.degree() <= 0) continue;
        ModPoly d = g.derivative();
        if (d.is_zero()) {
            // g = h(x^p); over F_p, h(x^p) = h(x)^p
            unsigned long pi = mpz_get_ui(p.get_mpz_t());
            std::vector<Int> hc;
            for (size_t i = 0; i < g.coeffs().size(); i += pi) hc.push_back(g.coeff(i));
            stack.push_back({ModPoly(std::move(hc), p), mult * pi});
            continue;
        }
        ModPoly c = g.gcd(d);
        ModPoly w = g.divrem(c).first; // product of factors with multiplicity not divisible by p... peel one by one
        unsigned long i = 1;
        while (w.degree() > 0) {
            ModPoly y = w.gcd(c);
            ModPoly fac = w.divrem(y).first; // factors of exact multiplicity i
            if (fac.degree() > 0) squarefree_parts.push_back({fac, mult * i});
            w = y;
            c = c.divrem(y).first;
            ++i;
        }
        if (c.degree() > 0) stack.push_back({c, mult});
    }

    for (auto& [sf, mult] : squarefree_parts) {
        // distinct-degree factorization
        ModPoly g = sf.monic();
        ModPoly xp = ModPoly::x(p);
        ModPoly h = xp; // x^(p^d) mod g, built incrementally
        for (long d = 1; g.degree() > 0 && d <= g.degree(); ++d) {
            h = h.pow_mod(p, g);
            ModPoly gd = g.gcd(h - xp);
            if (gd.degree() > 0) {
                std::vector<ModPoly> irr;
                edf(gd, d, irr, rng);
                for (auto& q : irr) result.emplace_back(q, mult);
                g = g.divrem(gd).first;
                h = h.mod(g);
            }
            if (2 * (d + 1) > g.degree() && g.degree() > 0) {
                result.emplace_back(g.monic(), mult);
                g = ModPoly::constant(Int(1), p);
            }
        }
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return result;
}

namespace {

// One quadratic Hensel step (von zur Gathen & Gerhard, Alg. 15.10):
// given f = g*h (mod m), s*g + t*h = 1 (mod m), g and h monic,
// deg s < deg h, deg t < deg g, produce the same data mod m^2.
void hensel_step(const QPoly& f, QPoly& g, QPoly& h, QPoly& s, QPoly& t, const Int& m2) {
    ModPoly gm = ModPoly::from_qpoly(g, m2), hm = ModPoly::from_qpoly(h, m2);
    ModPoly sm = ModPoly::from_qpoly(s, m2), tm = ModPoly::from_qpoly(t, m2);
    ModPoly em = ModPoly::from_qpoly(f, m2) - gm * hm;
    auto [q, r] = (sm * em).divrem(hm);
    ModPoly gs = gm + tm * em + q * gm;
    ModPoly hs = hm + r;
    ModPoly bm = sm * gs + tm * hs - ModPoly::constant(Int(1), m2);
    auto [c, d] = (sm * bm).divrem(hs);
    ModPoly ss = sm - d;
    ModPoly ts = tm - tm * bm - c * gs;
    g = gs.to_qpoly();
    h = hs.to_qpoly();
    s = ss.to_qpoly();
    t = ts.to_qpoly();
}

} // namespace

std::vector<ModPoly> hensel_lift_coprime(const QPoly& f, const std::vector<ModPoly>& factors,
                                         const Int& p, unsigned long k) {
    if (!f.is_integral() || !f.is_monic()) throw Error("hensel: f must be monic integral");
    Int pk = pow_int(p, k);
    if (factors.size() == 1) return {ModPoly::from_qpoly(f, pk).monic()};

    ModPoly g1 = factors[0].monic();
    ModPoly h1 = ModPoly::from_qpoly(f, p).divrem(g1).first.monic();
    ModPoly u({}, p), v({}, p);
    ModPoly one = ModPoly::ext_gcd(g1, h1, u, v);
    if (one.degree() != 0) throw Error("hensel: factors not coprime mod p");
    // ext_gcd gives u*g + v*h = 1; the step wants s*g + t*h = 1 with
    // deg s < deg h, deg t < deg g. Reduce u mod h (adjusting v accordingly).
    auto [qq, ur] = u.divrem(h1);
    ModPoly vr = v + qq * g1;
    QPoly g = g1.to_qpoly(), h = h1.to_qpoly();
    QPoly s = ur.to_qpoly(), t = vr.to_qpoly();

    unsigned long prec = 1;
    while (prec < k) {
        unsigned long next = std::min(2 * prec, k);
        hensel_step(f, g, h, s, t, pow_int(p, next));
        prec = next;
    }
    ModPoly gk = ModPoly::from_qpoly(g, pk).monic();
    ModPoly hk = ModPoly::from_qpoly(h, pk).monic();
    std::vector<ModPoly> rest(factors.begin() + 1, factors.end());
    std::vector<ModPoly> lifted_rest = hensel_lift_coprime(hk.to_qpoly(), rest, p, k);
    std::vector<ModPoly> out{gk};
    out.insert(out.end(), lifted_rest.begin(), lifted_rest.end());
    return out;
}

} // namespace sl2spec
