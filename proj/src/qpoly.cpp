#include "sl2spec/qpoly.hpp"
#include "sl2spec/errors.hpp"
#include "sl2spec/linalg.hpp"

#include <map>
#include <sstream>

namespace sl2spec {

QPoly QPoly::monomial(size_t deg, const Rat& a) {
    std::vector<Rat> c(deg + 1);
    c[deg] = a;
    return QPoly(std::move(c));
}

QPoly QPoly::operator+(const QPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
    return QPoly(std::move(r));
}

QPoly QPoly::operator-(const QPoly& o) const {
    std::vector<Rat> r(std::max(c_.size(), o.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
    return QPoly(std::move(r));
}

QPoly QPoly::operator*(const QPoly& o) const {
    if (is_zero() || o.is_zero()) return QPoly();
    std::vector<Rat> r(c_.size() + o.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return QPoly(std::move(r));
}

QPoly QPoly::operator*(const Rat& s) const {
    std::vector<Rat> r(c_);
    for (auto& x : r) x *= s;
    return QPoly(std::move(r));
}

std::pair<QPoly, QPoly> QPoly::divrem(const QPoly& o) const {
    if (o.is_zero()) throw DivisionByZero();
    QPoly rem = *this;
    if (rem.degree() < o.degree()) return {QPoly(), rem};
    std::vector<Rat> q(rem.degree() - o.degree() + 1);
    Rat lead_inv = Rat(1) / o.leading();
    while (!rem.is_zero() && rem.degree() >= o.degree()) {
        long shift = rem.degree() - o.degree();
        Rat f = rem.leading() * lead_inv;
        q[shift] = f;
        rem = rem - o * QPoly::monomial(static_cast<size_t>(shift), f);
    }
    return {QPoly(std::move(q)), rem};
}

QPoly QPoly::derivative() const {
    if (c_.size() <= 1) return QPoly();
    std::vector<Rat> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Rat(static_cast<long>(i));
    return QPoly(std::move(r));
}

QPoly QPoly::monic() const {
    if (is_zero()) return *this;
    return *this * (Rat(1) / leading());
}

QPoly QPoly::gcd(const QPoly& o) const {
    QPoly a = *this, b = o;
    while (!b.is_zero()) {
        QPoly r = a.divrem(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Rat QPoly::eval(const Rat& x) const {
    Rat r(0);
    for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

QPoly QPoly::scale_arg(const Rat& s) const {
    std::vector<Rat> r(c_);
    Rat f(1);
    for (size_t i = 0; i < r.size(); ++i) {
        r[i] *= f;
        f *= s;
    }
    return QPoly(std::move(r));
}

Int QPoly::denominator_lcm() const {
    Int m = 1;
    for (const Rat& q : c_) mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), q.get_den().get_mpz_t());
    return m;
}

bool QPoly::is_integral() const {
    for (const Rat& q : c_)
        if (q.get_den() != 1) return false;
    return true;
}

std::string QPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        Rat a = c_[i];
        if (!first) os << (a > 0 ? " + " : " - ");
        else if (a < 0) os << "-";
        Rat absa = a > 0 ? a : Rat(-a);
        if (i == 0 || absa != 1) os << absa.get_str();
        if (i > 0) {
            if (absa != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

Int bareiss_det(std::vector<std::vector<Int>> m) {
    size_t n = m.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                Int num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = num / prev; // exact by Bareiss
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : Int(-m[n - 1][n - 1]);
}

Rat resultant(const QPoly& f, const QPoly& g) {
    if (f.is_zero() || g.is_zero()) return Rat(0);
    long m = f.degree(), n = g.degree();
    if (m == 0) return pow_rat(f.coeff(0), n);
    if (n == 0) return pow_rat(g.coeff(0), m);
    Int df = f.denominator_lcm(), dg = g.denominator_lcm();
    // Res(a*f, g) = a^deg(g) Res(f, g); clear denominators and divide back.
    std::vector<Int> fc(m + 1), gc(n + 1);
    for (long i = 0; i <= m; ++i) fc[i] = Int(f.coeff(i) * Rat(df));
    for (long i = 0; i <= n; ++i) gc[i] = Int(g.coeff(i) * Rat(dg));
    size_t N = static_cast<size_t>(m + n);
    std::vector<std::vector<Int>> s(N, std::vector<Int>(N, Int(0)));
    for (long row = 0; row < n; ++row)
        for (long i = 0; i <= m; ++i) s[row][row + (m - i)] = fc[i];
    for (long row = 0; row < m; ++row)
        for (long i = 0; i <= n; ++i) s[n + row][row + (n - i)] = gc[i];
    Int det = bareiss_det(std::move(s));
    Rat r(det);
    r /= pow_rat(Rat(df), n);
    r /= pow_rat(Rat(dg), m);
    return r;
}

QPoly cyclotomic(unsigned long n) {
    static std::map<unsigned long, QPoly> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    std::vector<Rat> xn(n + 1);
    xn[0] = -1;
    xn[n] = 1;
    QPoly num(std::move(xn));
    for (unsigned long d = 1; d < n; ++d) {
        if (n % d) continue;
        auto [q, r] = num.divrem(cyclotomic(d));
        if (!r.is_zero()) throw Error("cyclotomic recursion failed");
        num = q;
    }
    cache[n] = num;
    return num;
}

} // namespace sl2spec
