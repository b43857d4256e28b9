#include "sl2spec/numfield.hpp"
#include "sl2spec/errors.hpp"
#include "sl2spec/lll.hpp"
#include "sl2spec/modpoly.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sl2spec {

namespace {

constexpr mpfr_prec_t kMaxWorkingPrec = mpfr_prec_t(1) << 20;

using Coords = std::vector<Rat>;

Coords coords_add(const Coords& a, const Coords& b) {
    Coords r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Coords coords_sub(const Coords& a, const Coords& b) {
    Coords r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Coords coords_scale(const Coords& a, const Rat& s) {
    Coords r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

bool coords_zero(const Coords& a) {
    for (const Rat& x : a)
        if (x != 0) return false;
    return true;
}

// Multiplication on the monomial basis, recursing down the step chain.
// steps[i] describes level i; x, y have length 2^level.
Coords mul_rec(const std::vector<const TowerStep*>& steps, size_t level, const Coords& x,
               const Coords& y) {
    if (level == 0) return {x[0] * y[0]};
    size_t h = x.size() / 2;
    Coords x0(x.begin(), x.begin() + h), x1(x.begin() + h, x.end());
    Coords y0(y.begin(), y.begin() + h), y1(y.begin() + h, y.end());
    const TowerStep& st = *steps[level - 1];
    Coords p00 = mul_rec(steps, level - 1, x0, y0);
    Coords p11 = mul_rec(steps, level - 1, x1, y1);
    Coords cross = coords_add(mul_rec(steps, level - 1, x0, y1), mul_rec(steps, level - 1, x1, y0));
    // g^2 = -B g - C
    Coords low = coords_sub(p00, mul_rec(steps, level - 1, st.C, p11));
    Coords high = coords_sub(cross, mul_rec(steps, level - 1, st.B, p11));
    Coords r(x.size());
    std::copy(low.begin(), low.end(), r.begin());
    std::copy(high.begin(), high.end(), r.begin() + h);
    return r;
}

std::vector<const TowerStep*> step_chain(const FieldTower& t) {
    std::vector<const TowerStep*> v(t.num_steps());
    const FieldTower* cur = &t;
    for (size_t i = t.num_steps(); i-- > 0;) {
        v[i] = &cur->top();
        cur = cur->base().get();
    }
    return v;
}

} // namespace

// ---------------------------------------------------------------- FieldTower

TowerPtr FieldTower::rationals() {
    static TowerPtr q = [] {
        auto t = std::shared_ptr<FieldTower>(new FieldTower());
        t->steps_ = 0;
        t->real_ = true;
        return TowerPtr(t);
    }();
    return q;
}

const TowerStep& FieldTower::step(size_t i) const {
    if (i >= steps_) throw Error("step index out of range");
    const FieldTower* cur = this;
    for (size_t j = steps_ - 1; j > i; --j) cur = cur->base_.get();
    return cur->top_;
}

TowerPtr FieldTower::prefix(size_t n) const {
    if (n > steps_) throw Error("prefix longer than tower");
    TowerPtr cur = shared_from_this();
    while (cur->num_steps() > n) cur = cur->base();
    return cur;
}

bool FieldTower::same_structure(const FieldTower& o) const {
    if (steps_ != o.steps_) return false;
    for (size_t i = 0; i < steps_; ++i) {
        const TowerStep &a = step(i), &b = o.step(i);
        if (a.B != b.B || a.C != b.C || a.root_sign != b.root_sign) return false;
    }
    return true;
}

bool FieldTower::has_prefix(const FieldTower& other) const {
    if (other.num_steps() > steps_) return false;
    return prefix(other.num_steps())->same_structure(other);
}

std::string FieldTower::description() const {
    if (is_rationals()) return "Q";
    std::string s = base_->description();
    return s + "(" + top_.name + ")";
}

AlgNum FieldTower::gen(size_t i) const {
    if (i >= steps_) throw Error("gen index out of range");
    Coords c(degree());
    c[size_t(1) << i] = 1;
    return AlgNum(shared_from_this(), std::move(c));
}

AlgNum FieldTower::from_rational(const Rat& q) const {
    Coords c(degree());
    c[0] = q;
    return AlgNum(shared_from_this(), std::move(c));
}

AlgNum FieldTower::from_coords(Coords coords) const {
    if (coords.size() != degree()) throw Error("coordinate vector has wrong length");
    return AlgNum(shared_from_this(), std::move(coords));
}

AlgNum FieldTower::zero() const { return from_rational(Rat(0)); }
AlgNum FieldTower::one() const { return from_rational(Rat(1)); }

bool FieldTower::monomial_real(size_t m) const {
    for (size_t i = 0; i < steps_; ++i)
        if ((m >> i) & 1)
            if (!step(i).gen_real) return false;
    return true;
}

namespace {

// "+ branch" of sqrt(disc) under the distinguished embedding of the base:
// positive root for real positive disc, +i*sqrt(|disc|) for real negative
// disc, principal square root otherwise.
ComplexInterval sqrt_branch(const AlgNum& disc, const ComplexInterval& disc_box,
                            mpfr_prec_t prec) {
    if (disc.coordwise_real()) {
        const RealInterval& re = disc_box.re();
        if (re.certainly_positive())
            return ComplexInterval(re.sqrt(), RealInterval(prec));
        if (re.certainly_negative())
            return ComplexInterval(RealInterval(prec), (-re).sqrt());
        throw PrecisionExhausted("sign of a real discriminant");
    }
    return disc_box.sqrt_principal();
}

ComplexInterval eval_coords(const Coords& c, const std::vector<ComplexInterval>& monomials,
                            mpfr_prec_t prec) {
    ComplexInterval acc(prec);
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        acc = acc + monomials[i].scaled(RealInterval(c[i], prec));
    }
    return acc;
}

std::vector<ComplexInterval> monomials_from_gens(const std::vector<ComplexInterval>& gens,
                                                 size_t k, mpfr_prec_t prec) {
    size_t d = size_t(1) << k;
    std::vector<ComplexInterval> mono(d, ComplexInterval(prec));
    mono[0] = ComplexInterval(Rat(1), Rat(0), prec);
    for (size_t m = 1; m < d; ++m) {
        size_t low = m & (m - 1); // m with lowest set bit cleared
        size_t bit = m ^ low;
        size_t i = 0;
        while ((size_t(1) << i) != bit) ++i;
        mono[m] = (low == 0) ? gens[i] : mono[low] * gens[i];
    }
    return mono;
}

// Generator boxes for the embedding selected by sign pattern `mask`
// (bit i flips the branch at step i relative to the stored hints).
std::vector<ComplexInterval> gen_values_for_pattern(const FieldTower& tower, size_t mask,
                                                    mpfr_prec_t prec) {
    std::vector<const TowerStep*> steps = step_chain(tower);
    std::vector<ComplexInterval> gens;
    for (size_t i = 0; i < steps.size(); ++i) {
        const TowerStep& st = *steps[i];
        TowerPtr pre = tower.prefix(i);
        AlgNum B = pre->from_coords(st.B), C = pre->from_coords(st.C);
        AlgNum disc = B * B - C * Rat(4);
        mpfr_prec_t w = prec;
        while (true) {
            try {
                auto mono = monomials_from_gens(gens, i, w);
                ComplexInterval bb = eval_coords(st.B, mono, w);
                ComplexInterval db = eval_coords(disc.coords(), mono, w);
                ComplexInterval s = sqrt_branch(disc, db, w);
                int sign = st.root_sign * (((mask >> i) & 1) ? -1 : +1);
                ComplexInterval root = (sign > 0) ? (s - bb) : (-s - bb);
                RealInterval half(Rat(1, 2), w);
                root = root.scaled(half);
                if (st.gen_real) // both roots of a real pair are real
                    root = ComplexInterval(root.re(), RealInterval(w));
                gens.push_back(root);
                break;
            } catch (const PrecisionExhausted&) {
                if (w >= kMaxWorkingPrec) throw;
                w *= 2;
                // recompute lower generators at the higher precision
                gens.clear();
                std::vector<ComplexInterval> regen =
                    gen_values_for_pattern(*tower.prefix(i), mask & ((size_t(1) << i) - 1), w);
                gens = std::move(regen);
            }
        }
    }
    return gens;
}

} // namespace

std::vector<ComplexInterval> FieldTower::gen_values_locked(mpfr_prec_t prec) const {
    auto it = gen_values_.find(prec);
    if (it != gen_values_.end()) return it->second;
    auto v = gen_values_for_pattern(*this, 0, prec);
    gen_values_[prec] = v;
    return v;
}

std::vector<ComplexInterval> FieldTower::monomial_values(mpfr_prec_t prec) const {
    std::vector<ComplexInterval> gens;
    {
        std::lock_guard<std::mutex> lock(mu_);
        gens = gen_values_locked(prec);
    }
    return monomials_from_gens(gens, steps_, prec);
}

std::vector<std::vector<ComplexInterval>> FieldTower::all_embedding_values(mpfr_prec_t prec) const {
    std::vector<std::vector<ComplexInterval>> out;
    for (size_t mask = 0; mask < degree(); ++mask) {
        auto gens = gen_values_for_pattern(*this, mask, prec);
        out.push_back(monomials_from_gens(gens, steps_, prec));
    }
    return out;
}

TowerPtr FieldTower::extend(TowerPtr base, const std::string& name, std::vector<Rat> B,
                            std::vector<Rat> C, double hint_re, double hint_im) {
    if (!base) throw Error("null base tower");
    size_t d = base->degree();
    if (B.size() != d || C.size() != d)
        throw ConfigError("step coefficients must be coordinate vectors over the base tower");
    for (const Rat& q : B)
        if (q.get_den() != 1) throw ConfigError("step coefficients must be integral");
    for (const Rat& q : C)
        if (q.get_den() != 1) throw ConfigError("step coefficients must be integral");
    if (base->degree() * 2 > 16) throw UnsupportedField("tower degree would exceed 16");

    AlgNum Ba = base->from_coords(B), Ca = base->from_coords(C);
    AlgNum disc = Ba * Ba - Ca * Rat(4);
    if (disc.is_zero()) throw ConfigError("step polynomial has zero discriminant");
    if (sqrt_in_field(disc))
        throw ConfigError("step polynomial t^2 + B t + C is reducible over the base");

    auto t = std::shared_ptr<FieldTower>(new FieldTower());
    t->base_ = base;
    t->steps_ = base->steps_ + 1;
    t->top_.name = name;
    t->top_.B = std::move(B);
    t->top_.C = std::move(C);
    t->top_.hint_re = hint_re;
    t->top_.hint_im = hint_im;

    // decide realness of the chosen root
    bool disc_real = disc.coordwise_real();
    int disc_sign = 0;
    if (disc_real) {
        mpfr_prec_t w = 128;
        while (true) {
            ComplexInterval db = disc.embed(w);
            if (db.re().certainly_positive()) { disc_sign = 1; break; }
            if (db.re().certainly_negative()) { disc_sign = -1; break; }
            if (w >= kMaxWorkingPrec) throw PrecisionExhausted("discriminant sign");
            w *= 2;
        }
    }
    t->top_.gen_real = disc_real && disc_sign > 0 && Ba.coordwise_real() &&
                       std::abs(hint_im) < 1e-9;

    // pick the branch matching the hint, certified
    t->top_.root_sign = +1;
    mpfr_prec_t w = 128;
    while (true) {
        auto gens_base = gen_values_for_pattern(*base, 0, w);
        auto mono = monomials_from_gens(gens_base, base->steps_, w);
        ComplexInterval bb = eval_coords(t->top_.B, mono, w);
        ComplexInterval db = eval_coords(disc.coords(), mono, w);
        ComplexInterval s = sqrt_branch(disc, db, w);
        RealInterval half(Rat(1, 2), w);
        ComplexInterval rp = (s - bb).scaled(half);
        ComplexInterval rm = (-s - bb).scaled(half);
        ComplexInterval hint(RealInterval::from_double(hint_re, w),
                             RealInterval::from_double(hint_im, w));
        RealInterval dp = (rp - hint).norm2();
        RealInterval dm = (rm - hint).norm2();
        if (dp.certainly_less(dm)) { t->top_.root_sign = +1; break; }
        if (dm.certainly_less(dp)) { t->top_.root_sign = -1; break; }
        if (w >= 4096)
            throw ConfigError("root hint does not separate the two roots of step '" + name + "'");
        w *= 2;
    }
    t->real_ = base->real_ && t->top_.gen_real;
    return TowerPtr(t);
}

TowerPtr FieldTower::adjoin_sqrt(TowerPtr base, const Int& m) {
    if (m == 0 || m == 1) throw ConfigError("adjoin_sqrt of 0 or 1");
    size_t d = base->degree();
    Coords B(d), C(d);
    C[0] = Rat(-m);
    double hr = 0, hi = 0;
    double md = mpz_get_d(m.get_mpz_t());
    if (m > 0) hr = std::sqrt(md);
    else hi = std::sqrt(-md);
    std::string name = "sqrt(" + m.get_str() + ")";
    return extend(std::move(base), name, std::move(B), std::move(C), hr, hi);
}

// ------------------------------------------------------------------- AlgNum

AlgNum::AlgNum(TowerPtr tower, std::vector<Rat> coords)
    : tower_(std::move(tower)), c_(std::move(coords)) {
    if (!tower_) throw Error("AlgNum without tower");
    if (c_.size() != tower_->degree()) throw Error("coordinate vector has wrong length");
    for (Rat& q : c_) q.canonicalize();
}

bool AlgNum::is_zero() const { return coords_zero(c_); }

bool AlgNum::is_one() const {
    if (c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool AlgNum::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rat AlgNum::rational_value() const {
    if (!is_rational()) throw Error("not a rational value");
    return c_[0];
}

bool AlgNum::operator==(const AlgNum& o) const {
    if (tower_ == o.tower_ || tower_->same_structure(*o.tower_)) return c_ == o.c_;
    throw Error("comparing elements of different towers");
}

AlgNum AlgNum::operator+(const AlgNum& o) const { return AlgNum(tower_, coords_add(c_, o.c_)); }
AlgNum AlgNum::operator-(const AlgNum& o) const { return AlgNum(tower_, coords_sub(c_, o.c_)); }
AlgNum AlgNum::operator-() const { return AlgNum(tower_, coords_scale(c_, Rat(-1))); }
AlgNum AlgNum::operator*(const Rat& s) const { return AlgNum(tower_, coords_scale(c_, s)); }

AlgNum AlgNum::operator*(const AlgNum& o) const {
    auto steps = step_chain(*tower_);
    return AlgNum(tower_, mul_rec(steps, tower_->num_steps(), c_, o.c_));
}

AlgNum AlgNum::step_conj() const {
    if (tower_->is_rationals()) throw NotQuadraticStep();
    size_t h = c_.size() / 2;
    Coords x0(c_.begin(), c_.begin() + h), x1(c_.begin() + h, c_.end());
    auto steps = step_chain(*tower_);
    // sigma(x0 + x1 g) = (x0 - B x1) - x1 g
    Coords bx1 = mul_rec(steps, tower_->num_steps() - 1, tower_->top().B, x1);
    Coords low = coords_sub(x0, bx1);
    Coords r(c_.size());
    std::copy(low.begin(), low.end(), r.begin());
    for (size_t i = 0; i < h; ++i) r[h + i] = -x1[i];
    return AlgNum(tower_, std::move(r));
}

AlgNum AlgNum::step_norm() const {
    AlgNum prod = *this * step_conj();
    size_t h = c_.size() / 2;
    for (size_t i = h; i < prod.c_.size(); ++i)
        if (prod.c_[i] != 0) throw Error("step_norm: nonzero top half");
    Coords low(prod.c_.begin(), prod.c_.begin() + h);
    return AlgNum(tower_->base(), std::move(low));
}

AlgNum AlgNum::inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (tower_->is_rationals()) return AlgNum(tower_, {Rat(1) / c_[0]});
    AlgNum s = step_conj();
    AlgNum n = step_norm();
    AlgNum ninv = n.inverse().lift_to(tower_);
    return s * ninv;
}

AlgNum AlgNum::operator/(const AlgNum& o) const { return *this * o.inverse(); }

AlgNum AlgNum::pow(long e) const {
    if (e == 0) return tower_->one();
    AlgNum base = e > 0 ? *this : inverse();
    unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
    AlgNum acc = tower_->one();
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

bool AlgNum::coordwise_real() const {
    for (size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0 && !tower_->monomial_real(i)) return false;
    return true;
}

ComplexInterval AlgNum::embed(mpfr_prec_t precision_bits) const {
    if (precision_bits < 32) precision_bits = 32;
    mpfr_prec_t w = precision_bits + 64;
    while (true) {
        auto mono = tower_->monomial_values(w);
        ComplexInterval box = eval_coords(c_, mono, w);
        // width <= 2^(8-prec) * max(1, |x|)
        Real bound(w);
        RealInterval a = box.abs();
        mpfr_set_ui(bound.get(), 1, MPFR_RNDU);
        if (mpfr_greater_p(a.hi().get(), bound.get())) mpfr_set(bound.get(), a.hi().get(), MPFR_RNDU);
        mpfr_mul_2si(bound.get(), bound.get(), 8 - static_cast<long>(precision_bits), MPFR_RNDD);
        Real wr = box.re().width(), wi = box.im().width();
        if (mpfr_lessequal_p(wr.get(), bound.get()) && mpfr_lessequal_p(wi.get(), bound.get()))
            return box;
        if (w >= kMaxWorkingPrec)
            throw PrecisionExhausted("embedding of " + str());
        w *= 2;
    }
}

ComplexInterval AlgNum::embed_at(size_t idx, mpfr_prec_t precision_bits) const {
    if (precision_bits < 32) precision_bits = 32;
    mpfr_prec_t w = precision_bits + 64;
    auto gens = gen_values_for_pattern(*tower_, idx, w);
    auto mono = monomials_from_gens(gens, tower_->num_steps(), w);
    return eval_coords(c_, mono, w);
}

AlgNum AlgNum::lift_to(const TowerPtr& bigger) const {
    if (bigger->same_structure(*tower_)) return AlgNum(bigger, c_);
    if (!bigger->has_prefix(*tower_))
        throw UnsupportedField("lift target does not extend the element's tower");
    Coords c(bigger->degree());
    std::copy(c_.begin(), c_.end(), c.begin());
    return AlgNum(bigger, std::move(c));
}

std::optional<AlgNum> AlgNum::project_to_prefix(size_t steps) const {
    size_t d = size_t(1) << steps;
    for (size_t i = d; i < c_.size(); ++i)
        if (c_[i] != 0) return std::nullopt;
    Coords c(c_.begin(), c_.begin() + d);
    return AlgNum(tower_->prefix(steps), std::move(c));
}

std::string AlgNum::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t m = 0; m < c_.size(); ++m) {
        if (c_[m] == 0) continue;
        Rat a = c_[m];
        if (!first) os << (a > 0 ? " + " : " - ");
        else if (a < 0) os << "-";
        Rat absa = a > 0 ? a : Rat(-a);
        std::string mono;
        for (size_t i = 0; i < tower_->num_steps(); ++i)
            if ((m >> i) & 1) {
                if (!mono.empty()) mono += "*";
                mono += tower_->step(i).name;
            }
        if (mono.empty()) os << absa.get_str();
        else {
            if (absa != 1) os << absa.get_str() << "*";
            os << mono;
        }
        first = false;
    }
    return os.str();
}

AlgNum nf_arith(const AlgNum& x, const AlgNum& y, const std::string& op, long pow_exp) {
    if (op == "add") return x + y;
    if (op == "sub") return x - y;
    if (op == "mul") return x * y;
    if (op == "div") {
        if (y.is_zero()) throw DivisionByZero();
        return x / y;
    }
    if (op == "pow") return x.pow(pow_exp);
    throw Error("unknown nf_arith op '" + op + "'");
}

// ------------------------------------------------------- minimal polynomials

void FieldTower::build_primitive_locked() const {
    if (primitive_) return;
    size_t d = degree();
    if (steps_ == 0) {
        primitive_ = from_rational(Rat(0));
        primitive_minpoly_ = QPoly::x();
        coords_to_powers_ = MatQ::identity(1);
        return;
    }

    auto self = shared_from_this();
    std::vector<AlgNum> candidates;
    {
        // small-weight generator combinations
        std::vector<long> weights{1, 2, 3};
        size_t k = steps_;
        std::vector<size_t> idx(k, 0);
        while (true) {
            Coords c(d);
            for (size_t i = 0; i < k; ++i) c[size_t(1) << i] = Rat(weights[idx[i]]);
            candidates.push_back(from_coords(c));
            size_t j = 0;
            while (j < k && ++idx[j] == weights.size()) idx[j++] = 0;
            if (j == k) break;
        }
        // half-sums of monomial pairs: catches maximal-order generators like
        // (1 + sqrt5)/2 in Q(sqrt5) and (sqrt2 + i*sqrt2)/2 in Q(i, sqrt2)
        for (size_t a = 0; a < d; ++a)
            for (size_t b = a + 1; b < d; ++b)
                for (int sgn : {+1, -1}) {
                    Coords c(d);
                    c[a] = Rat(1, 2);
                    c[b] = Rat(sgn, 2);
                    candidates.push_back(from_coords(c));
                }
    }

    std::optional<Rat> best_disc;
    for (const AlgNum& theta : candidates) {
        // powers of theta
        MatQ powers(d, d);
        AlgNum p = one();
        bool primitive = true;
        MatQ rank_probe(d, d);
        for (size_t j = 0; j < d; ++j) {
            for (size_t i = 0; i < d; ++i) powers(i, j) = p.coords()[i];
            p = p * theta;
        }
        rank_probe = powers;
        if (rank_probe.rref() != d) primitive = false;
        if (!primitive) continue;
        // minpoly: theta^d = powers * a
        auto a = powers.solve(p.coords());
        if (!a) continue;
        std::vector<Rat> mc(d + 1);
        for (size_t i = 0; i < d; ++i) mc[i] = -(*a)[i];
        mc[d] = 1;
        QPoly f{std::move(mc)};
        if (!f.is_integral()) continue;
        Rat disc = resultant(f, f.derivative());
        Rat adisc = disc > 0 ? disc : Rat(-disc);
        if (!best_disc || adisc < *best_disc) {
            best_disc = adisc;
            primitive_ = theta;
            primitive_minpoly_ = f;
            coords_to_powers_ = powers;
        }
    }
    if (!primitive_)
        throw UnsupportedField("no integral primitive element found for " + description());
}

const AlgNum& FieldTower::primitive_element() const {
    std::lock_guard<std::mutex> lock(mu_);
    build_primitive_locked();
    return *primitive_;
}

const QPoly& FieldTower::primitive_minpoly() const {
    std::lock_guard<std::mutex> lock(mu_);
    build_primitive_locked();
    return *primitive_minpoly_;
}

QPoly FieldTower::to_primitive_poly(const AlgNum& x) const {
    std::lock_guard<std::mutex> lock(mu_);
    build_primitive_locked();
    auto a = coords_to_powers_->solve(x.coords());
    if (!a) throw Error("to_primitive_poly: inconsistent solve");
    return QPoly(std::move(*a));
}

QPoly minimal_polynomial(const AlgNum& x) {
    const TowerPtr& T = x.tower();
    size_t d = T->degree();
    if (d == 1) return QPoly({-x.coords()[0], Rat(1)});
    std::vector<AlgNum> powers{T->one()};
    for (size_t j = 1; j <= d; ++j) {
        powers.push_back(powers.back() * x);
        // does x^j depend linearly on lower powers?
        MatQ m(d, j);
        for (size_t col = 0; col < j; ++col)
            for (size_t i = 0; i < d; ++i) m(i, col) = powers[col].coords()[i];
        auto sol = m.solve(powers[j].coords());
        if (sol) {
            std::vector<Rat> mc(j + 1);
            for (size_t i = 0; i < j; ++i) mc[i] = -(*sol)[i];
            mc[j] = 1;
            QPoly f{std::move(mc)};
            // exact verification through the tower
            AlgNum acc = T->zero();
            for (size_t i = j + 1; i-- > 0;) acc = acc * x + T->from_rational(f.coeff(i));
            if (!acc.is_zero()) throw Error("minimal polynomial verification failed");
            return f;
        }
    }
    throw Error("minimal polynomial not found (tower degree exceeded)");
}

// -------------------------------------------------------------- square roots

std::optional<AlgNum> sqrt_in_field(const AlgNum& x) {
    const TowerPtr& T = x.tower();
    if (T->is_rationals()) {
        auto r = sqrt_exact(x.coords()[0]);
        if (!r) return std::nullopt;
        return T->from_rational(*r);
    }
    TowerPtr base = T->base();
    size_t h = T->degree() / 2;
    Coords u_c(x.coords().begin(), x.coords().begin() + h);
    Coords v_c(x.coords().begin() + h, x.coords().end());
    AlgNum u = base->from_coords(u_c), v = base->from_coords(v_c);
    AlgNum B = base->from_coords(T->top().B), C = base->from_coords(T->top().C);
    AlgNum dsc = B * B - C * Rat(4);
    AlgNum g = T->gen(T->num_steps() - 1);

    auto assemble = [&](const AlgNum& p, const AlgNum& q) -> std::optional<AlgNum> {
        AlgNum y = p.lift_to(T) + q.lift_to(T) * g;
        if (y * y == x) return y;
        return std::nullopt;
    };

    if (v.is_zero()) {
        if (auto r = sqrt_in_field(u)) {
            if (auto y = assemble(*r, base->zero())) return y;
        }
        // q-branch: y = Bq/2 + q g with q^2 = 4u / disc
        if (auto q = sqrt_in_field(u * Rat(4) / dsc)) {
            AlgNum p = B * *q * Rat(1, 2);
            if (auto y = assemble(p, *q)) return y;
            if (auto y = assemble(-p, -*q)) return y;
        }
        return std::nullopt;
    }

    // y = p + q g with q != 0:
    //   p^2 - C q^2 = u,  q (2p - B q) = v
    // eliminating p gives  disc * q^4 + (2Bv - 4u) q^2 + v^2 = 0.
    AlgNum lin = u * Rat(4) - B * v * Rat(2); // 4u - 2Bv
    AlgNum Dp = lin * lin - dsc * v * v * Rat(4);
    auto w = sqrt_in_field(Dp);
    if (!w) return std::nullopt;
    for (int sgn : {+1, -1}) {
        AlgNum q2 = (lin + *w * Rat(sgn)) / (dsc * Rat(2));
        auto q = sqrt_in_field(q2);
        if (!q || q->is_zero()) continue;
        AlgNum p = (v / *q + B * *q) * Rat(1, 2);
        if (auto y = assemble(p, *q)) return y;
    }
    return std::nullopt;
}

// ------------------------------------------------------------- prime ideals

bool PrimeIdeal::operator<(const PrimeIdeal& o) const {
    if (p != o.p) return p < o.p;
    if (e != o.e) return e < o.e;
    if (f != o.f) return f < o.f;
    return residue_poly < o.residue_poly;
}

bool PrimeIdeal::operator==(const PrimeIdeal& o) const {
    return p == o.p && e == o.e && f == o.f && residue_poly == o.residue_poly;
}

std::string PrimeIdeal::str(const std::string& theta_name) const {
    if (f == 1 && residue_poly.size() == 2 && residue_poly[1] == 1 && residue_poly[0] == 0 &&
        e == 1)
        return "(" + p.get_str() + ")";
    ModPoly g(std::vector<Int>(residue_poly), p);
    return "(" + p.get_str() + ", " + g.to_qpoly_centered().str(theta_name) + ")";
}

std::string SplittingType::kind_str() const {
    switch (kind) {
        case SplittingKind::Split: return "split";
        case SplittingKind::Inert: return "inert";
        case SplittingKind::Ramified: return "ramified";
        default: return "mixed";
    }
}

namespace {

struct ModFactorization {
    std::vector<std::pair<ModPoly, unsigned long>> irreducibles; // sorted
    bool dedekind_ok;
};

ModFactorization dedekind_factor(const QPoly& f, const Int& p) {
    ModPoly fp = ModPoly::from_qpoly(f, p);
    auto fac = factor_mod_p(fp);
    // Dedekind criterion: with fbar = prod g_i^{e_i}, g = prod g_i,
    // h = fbar / g, T = (g*h - f)/p, the order Z[theta] is p-maximal iff
    // gcd(Tbar, gbar, hbar) = 1.
    ModPoly gbar = ModPoly::constant(Int(1), p), hbar = ModPoly::constant(Int(1), p);
    for (auto& [gi, ei] : fac) {
        gbar = gbar * gi;
        for (unsigned long j = 1; j < ei; ++j) hbar = hbar * gi;
    }
    QPoly g = gbar.to_qpoly(), h = hbar.to_qpoly();
    QPoly tnum = g * h - f;
    std::vector<Rat> tc(tnum.coeffs().size());
    for (size_t i = 0; i < tc.size(); ++i) {
        Rat c = tnum.coeff(i) / Rat(p);
        if (c.get_den() != 1) throw Error("dedekind: g*h != f mod p");
        tc[i] = c;
    }
    ModPoly tbar = ModPoly::from_qpoly(QPoly(std::move(tc)), p);
    ModPoly d = tbar.gcd(gbar).gcd(hbar);
    return {std::move(fac), d.degree() <= 0};
}

} // namespace

SplittingType splitting_type(const Int& p, const TowerPtr& K) {
    if (!is_probable_prime(p)) throw Error("splitting_type: p must be prime");
    SplittingType st;
    if (K->is_rationals()) {
        st.primes.push_back(PrimeIdeal{p, {Int(0), Int(1)}, 1, 1});
        st.kind = SplittingKind::Split;
        return st;
    }
    const QPoly& f = K->primitive_minpoly();
    auto df = dedekind_factor(f, p);
    if (!df.dedekind_ok) throw NonMonogenicPrime(mpz_get_ui(p.get_mpz_t()));
    for (auto& [gi, ei] : df.irreducibles) {
        PrimeIdeal P;
        P.p = p;
        P.residue_poly = gi.coeffs();
        P.e = ei;
        P.f = static_cast<unsigned long>(gi.degree());
        st.primes.push_back(std::move(P));
    }
    unsigned long deg = K->degree();
    bool ramified = false;
    for (auto& P : st.primes)
        if (P.e > 1) ramified = true;
    if (ramified) st.kind = SplittingKind::Ramified;
    else if (st.primes.size() == deg) st.kind = SplittingKind::Split;
    else if (st.primes.size() == 1 && st.primes[0].f == deg) st.kind = SplittingKind::Inert;
    else st.kind = SplittingKind::Mixed;
    return st;
}

ValuationVector ValuationVector::operator+(const ValuationVector& o) const {
    ValuationVector r = *this;
    for (auto& [P, v] : o.entries) {
        r.entries[P] += v;
        if (r.entries[P] == 0) r.entries.erase(P);
    }
    return r;
}

ValuationVector ValuationVector::operator-() const {
    ValuationVector r;
    for (auto& [P, v] : entries) r.entries[P] = -v;
    return r;
}

ValuationVector ValuationVector::scaled(long k) const {
    ValuationVector r;
    if (k == 0) return r;
    for (auto& [P, v] : entries) r.entries[P] = v * k;
    return r;
}

std::string ValuationVector::str(const std::string& theta_name) const {
    if (entries.empty()) return "{}";
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [P, v] : entries) {
        if (!first) os << ", ";
        os << P.str(theta_name) << " -> " << v;
        first = false;
    }
    os << "}";
    return os.str();
}

namespace {

// resultant of two integer polynomials, exact (Sylvester + Bareiss)
Int resultant_int(const std::vector<Int>& fc, const std::vector<Int>& gc) {
    long m = static_cast<long>(fc.size()) - 1, n = static_cast<long>(gc.size()) - 1;
    if (m < 0 || n < 0) return 0;
    if (m == 0) return pow_int(fc[0], static_cast<unsigned long>(n));
    if (n == 0) return pow_int(gc[0], static_cast<unsigned long>(m));
    size_t N = static_cast<size_t>(m + n);
    std::vector<std::vector<Int>> s(N, std::vector<Int>(N, Int(0)));
    for (long row = 0; row < n; ++row)
        for (long i = 0; i <= m; ++i) s[row][row + (m - i)] = fc[i];
    for (long row = 0; row < m; ++row)
        for (long i = 0; i <= n; ++i) s[n + row][row + (n - i)] = gc[i];
    return bareiss_det(std::move(s));
}

} // namespace

ValuationVector factor_principal(const AlgNum& x) {
    if (x.is_zero()) throw Error("factor_principal(0)");
    const TowerPtr& K = x.tower();
    ValuationVector out;

    if (K->is_rationals()) {
        Rat q = x.coords()[0];
        auto handle = [&](const Int& n, long sign) {
            if (n == 1) return;
            for (auto& [p, e] : factor_integer(n)) {
                PrimeIdeal P{p, {Int(0), Int(1)}, 1, 1};
                out.entries[P] += sign * static_cast<long>(e);
                if (out.entries[P] == 0) out.entries.erase(P);
            }
        };
        handle(abs(Int(q.get_num())), +1);
        handle(Int(q.get_den()), -1);
        return out;
    }

    // clear denominators: x = y / m with y having integral coordinates
    Int m = 1;
    for (const Rat& c : x.coords())
        mpz_lcm(m.get_mpz_t(), m.get_mpz_t(), c.get_den().get_mpz_t());
    AlgNum y = x * Rat(m);
    const QPoly& f = K->primitive_minpoly();
    QPoly Y = K->to_primitive_poly(y);
    Rat Nrat = resultant(f, Y);
    if (Nrat == 0) throw Error("factor_principal: zero norm for nonzero element");
    if (Nrat.get_den() != 1) throw Error("factor_principal: non-integral norm of integral element");
    Int N = abs(Int(Nrat.get_num()));

    std::map<Int, unsigned long> cand = factor_integer(N);
    for (auto& [p, e] : factor_integer(m)) cand.emplace(p, e);

    // Y with cleared denominators; scaling by an integer D changes
    // Res(F, D*Y) by D^deg(F), which does not affect v_p for p coprime to D.
    Int D = Y.denominator_lcm();
    std::vector<Int> Yc(Y.coeffs().size());
    for (size_t i = 0; i < Yc.size(); ++i) Yc[i] = Int(Y.coeff(i) * Rat(D));

    for (auto& [p, dummy] : cand) {
        (void)dummy;
        unsigned long vm = valuation_at(p, m);
        unsigned long V = valuation_at(p, N);
        if (V == 0 && vm == 0) continue;
        SplittingType st = splitting_type(p, K); // throws NonMonogenicPrime on Dedekind failure
        if (mpz_divisible_p(D.get_mpz_t(), p.get_mpz_t()))
            throw Error("factor_principal: theta-representation not p-integral at a "
                        "monogenic prime");

        std::vector<long> vals(st.primes.size(), 0);
        if (V > 0) {
            if (st.primes.size() == 1) {
                unsigned long fdeg = st.primes[0].f;
                if (V % fdeg) throw Error("factor_principal: valuation not divisible by f");
                vals[0] = static_cast<long>(V / fdeg);
            } else {
                unsigned long k = V + 2;
                Int pk = pow_int(p, k);
                // coarse coprime factorization: group g_i^{e_i}
                std::vector<ModPoly> groups;
                for (auto& P : st.primes) {
                    ModPoly gi(std::vector<Int>(P.residue_poly), p);
                    ModPoly acc = ModPoly::constant(Int(1), p);
                    for (unsigned long j = 0; j < P.e; ++j) acc = acc * gi;
                    groups.push_back(acc);
                }
                auto lifted = hensel_lift_coprime(f, groups, p, k);
                // verify the lift
                ModPoly prod = ModPoly::constant(Int(1), pk);
                for (auto& F : lifted) prod = prod * F;
                if (!(prod == ModPoly::from_qpoly(f, pk)))
                    throw Error("hensel lift verification failed");
                unsigned long total = 0;
                for (size_t i = 0; i < lifted.size(); ++i) {
                    std::vector<Int> Fc = lifted[i].coeffs();
                    Int R = resultant_int(Fc, Yc) % pk;
                    if (R < 0) R += pk;
                    if (R == 0)
                        throw Error("factor_principal: resultant precision loss");
                    unsigned long v = valuation_at(p, R);
                    if (v % st.primes[i].f) throw Error("factor_principal: v not divisible by f");
                    vals[i] = static_cast<long>(v / st.primes[i].f);
                    total += v;
                }
                if (total != V) throw Error("factor_principal: local/global mismatch");
            }
        }
        for (size_t i = 0; i < st.primes.size(); ++i) {
            long v = vals[i] - static_cast<long>(st.primes[i].e * vm);
            if (v != 0) out.entries[st.primes[i]] = v;
        }
    }
    return out;
}

bool is_square_residue(const Int& a, const Int& p) {
    if (!is_probable_prime(p)) throw Error("is_square_residue: p must be prime");
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    if (g != 1) throw Error("is_square_residue: gcd(a, p) != 1");
    if (p == 2) return true;
    Int e = (p - 1) / 2, r;
    Int base = a % p;
    if (base < 0) base += p;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r == 1;
}

std::optional<bool> is_square_mod_prime(const AlgNum& x, const PrimeIdeal& P) {
    const TowerPtr& K = x.tower();
    const Int& p = P.p;
    if (p == 2) return true; // every element of F_{2^f} is a square
    QPoly Y = K->is_rationals() ? QPoly::constant(x.coords()[0]) : K->to_primitive_poly(x);
    Int D = Y.denominator_lcm();
    if (mpz_divisible_p(D.get_mpz_t(), p.get_mpz_t())) return std::nullopt;
    ModPoly g(std::vector<Int>(P.residue_poly), p);
    ModPoly z = ModPoly::from_qpoly(Y, p).mod(g);
    if (z.is_zero()) return std::nullopt; // x lies in P
    Int q = pow_int(p, P.f);
    ModPoly r = z.pow_mod((q - 1) / 2, g);
    if (r.degree() == 0 && r.coeff(0) == 1) return true;
    ModPoly neg = r + ModPoly::constant(Int(1), p);
    if (neg.mod(g).is_zero()) return false;
    return std::nullopt;
}

AlgNum relative_norm(const AlgNum& x) {
    if (x.tower()->is_rationals()) throw NotQuadraticStep();
    return x.step_norm();
}

// ------------------------------------------------------------ roots of unity

namespace {

// candidate box around exp(2*pi*i*k/n)
ComplexInterval root_of_unity_box(unsigned long k, unsigned long n, mpfr_prec_t prec) {
    RealInterval two_pi = RealInterval::pi(prec).scaled_2exp(1);
    RealInterval angle = two_pi * RealInterval(Rat(static_cast<long>(k), static_cast<long>(n)), prec);
    // cos/sin with directed rounding via monotonic hull of endpoints is
    // overkill here; evaluate at both endpoints and pad by the width.
    Real c_lo(prec), c_hi(prec), s_lo(prec), s_hi(prec);
    mpfr_cos(c_lo.get(), angle.lo().get(), MPFR_RNDD);
    mpfr_cos(c_hi.get(), angle.hi().get(), MPFR_RNDU);
    mpfr_sin(s_lo.get(), angle.lo().get(), MPFR_RNDD);
    mpfr_sin(s_hi.get(), angle.hi().get(), MPFR_RNDU);
    Real w = angle.width();
    auto pad = [&](Real a, Real b) {
        Real lo(prec), hi(prec);
        mpfr_min(lo.get(), a.get(), b.get(), MPFR_RNDD);
        mpfr_max(hi.get(), a.get(), b.get(), MPFR_RNDU);
        mpfr_sub(lo.get(), lo.get(), w.get(), MPFR_RNDD);
        mpfr_add(hi.get(), hi.get(), w.get(), MPFR_RNDU);
        return RealInterval::make(lo, hi);
    };
    return ComplexInterval(pad(c_lo, c_hi), pad(s_lo, s_hi));
}

} // namespace

// Reconstruction of a tower element from a complex box via LLL; exact
// verification is the caller's job. Internal helper shared with the
// relations module.
std::optional<AlgNum> algebraic_reconstruct(const ComplexInterval& v, const TowerPtr& K,
                                            const Int& height_bound, mpfr_prec_t prec) {
    size_t d = K->degree();
    auto mono = K->monomial_values(prec + 64);
    // lattice rows: [ I_{d+1} | S*Re(b_i), S*Im(b_i) ; ... ; S*(-Re v), S*(-Im v) ]
    long scale_bits = static_cast<long>(prec);
    auto scaled = [&](const RealInterval& r) {
        Real m = r.mid();
        Real s(mpfr_get_prec(m.get()));
        mpfr_mul_2si(s.get(), m.get(), scale_bits, MPFR_RNDN);
        Int z;
        mpfr_get_z(z.get_mpz_t(), s.get(), MPFR_RNDN);
        return z;
    };
    std::vector<std::vector<Int>> basis(d + 1, std::vector<Int>(d + 3, Int(0)));
    for (size_t i = 0; i < d; ++i) {
        basis[i][i] = 1;
        basis[i][d + 1] = scaled(mono[i].re());
        basis[i][d + 2] = scaled(mono[i].im());
    }
    basis[d][d] = 1;
    basis[d][d + 1] = -scaled(v.re());
    basis[d][d + 2] = -scaled(v.im());
    lll_reduce(basis);
    for (auto& row : basis) {
        const Int& q = row[d];
        if (q == 0) continue;
        bool small = abs(q) <= height_bound;
        Coords c(d);
        for (size_t i = 0; i < d && small; ++i) {
            if (abs(row[i]) > height_bound) small = false;
            c[i] = Rat(row[i], q);
        }
        if (!small) continue;
        AlgNum cand = K->from_coords(c);
        ComplexInterval ce = cand.embed(prec);
        if (ce.overlaps(v)) return cand;
    }
    return std::nullopt;
}

std::vector<AlgNum> RootsOfUnityGroup::elements() const {
    std::vector<AlgNum> out;
    AlgNum w = generator.tower()->one();
    for (unsigned long j = 0; j < order; ++j) {
        out.push_back(w);
        w = w * generator;
    }
    return out;
}

RootsOfUnityGroup roots_of_unity(const TowerPtr& K) {
    unsigned long d = static_cast<unsigned long>(K->degree());
    RootsOfUnityGroup W{2, K->from_rational(Rat(-1))};
    if (K->is_real()) return W;
    auto orders = phi_bounded_orders(d);
    std::sort(orders.rbegin(), orders.rend());
    for (unsigned long n : orders) {
        if (n <= 2) continue;
        ComplexInterval box = root_of_unity_box(1, n, 192);
        auto cand = algebraic_reconstruct(box, K, Int(1) << 24, 160);
        if (!cand) continue;
        // exact verification of the order
        if (!(cand->pow(static_cast<long>(n)).is_one())) continue;
        bool primitive = true;
        for (unsigned long q = 2; q <= n && primitive; ++q) {
            if (n % q) continue;
            if (!is_probable_prime(Int(q))) continue;
            if (cand->pow(static_cast<long>(n / q)).is_one()) primitive = false;
        }
        if (!primitive) continue;
        W.order = n;
        W.generator = *cand;
        return W;
    }
    return W;
}

// ---------------------------------------------------------------- conjugation

namespace {

AlgNum apply_gen_images(const AlgNum& x, const std::vector<AlgNum>& images, const TowerPtr& T) {
    // substitute generators by their images (x may live in a prefix tower)
    AlgNum acc = T->zero();
    const Coords& c = x.coords();
    for (size_t m = 0; m < c.size(); ++m) {
        if (c[m] == 0) continue;
        AlgNum mono = T->one();
        for (size_t i = 0; i < images.size(); ++i)
            if ((m >> i) & 1) mono = mono * images[i];
        acc = acc + mono * c[m];
    }
    return acc;
}

} // namespace

std::optional<MatQ> FieldTower::build_conjugation() const {
    TowerPtr self = shared_from_this();
    size_t d = degree();
    if (real_) return MatQ::identity(d);
    std::vector<AlgNum> images; // conj(g_i) as elements of the full tower
    for (size_t i = 0; i < steps_; ++i) {
        const TowerStep& st = step(i);
        TowerPtr pre = prefix(i);
        AlgNum B = pre->from_coords(st.B), C = pre->from_coords(st.C);
        AlgNum disc = B * B - C * Rat(4);
        AlgNum discL = disc.lift_to(self);
        AlgNum Bc = apply_gen_images(B.lift_to(self), images, self);
        AlgNum discC = apply_gen_images(discL, images, self);
        auto y = sqrt_in_field(discC);
        if (!y) return std::nullopt; // tower not stable under conjugation
        // two candidates; pick the one matching numeric conjugation
        AlgNum cand1 = (*y - Bc) * Rat(1, 2);
        AlgNum cand2 = (-*y - Bc) * Rat(1, 2);
        AlgNum gi = self->gen(i);
        mpfr_prec_t w = 128;
        const AlgNum* chosen = nullptr;
        while (!chosen) {
            ComplexInterval target = gi.embed(w).conj();
            ComplexInterval e1 = cand1.embed(w), e2 = cand2.embed(w);
            RealInterval d1 = (e1 - target).norm2(), d2 = (e2 - target).norm2();
            if (d1.certainly_less(d2)) chosen = &cand1;
            else if (d2.certainly_less(d1)) chosen = &cand2;
            else if (w >= kMaxWorkingPrec)
                throw PrecisionExhausted("conjugation image selection");
            else w *= 2;
        }
        images.push_back(*chosen);
    }
    // matrix on the monomial basis
    MatQ M(d, d);
    for (size_t m = 0; m < d; ++m) {
        AlgNum mono = self->one();
        for (size_t i = 0; i < steps_; ++i)
            if ((m >> i) & 1) mono = mono * images[i];
        for (size_t r = 0; r < d; ++r) M(r, m) = mono.coords()[r];
    }
    // involution check
    MatQ sq = M * M;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            if (sq(i, j) != (i == j ? Rat(1) : Rat(0)))
                throw Error("conjugation candidate is not an involution");
    return M;
}

std::optional<MatQ> FieldTower::conjugation() const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        if (conj_disabled_) return std::nullopt;
        if (conj_) return *conj_;
    }
    // built outside the lock: construction embeds elements of this tower,
    // which takes the same mutex
    auto built = build_conjugation();
    std::lock_guard<std::mutex> lock(mu_);
    if (!conj_) conj_ = std::move(built);
    return *conj_;
}

// ------------------------------------------------------------------ coercion

std::pair<AlgNum, AlgNum> coerce_common(const AlgNum& x, const AlgNum& y) {
    const TowerPtr &Tx = x.tower(), &Ty = y.tower();
    if (Tx->same_structure(*Ty)) return {x, AlgNum(Tx, y.coords())};
    if (Tx->has_prefix(*Ty)) return {x, y.lift_to(Tx)};
    if (Ty->has_prefix(*Tx)) return {x.lift_to(Ty), y};

    // compositum for towers whose steps have rational coefficients
    auto rational_steps = [](const FieldTower& t) {
        for (size_t i = 0; i < t.num_steps(); ++i) {
            const TowerStep& st = t.step(i);
            for (size_t j = 1; j < st.B.size(); ++j)
                if (st.B[j] != 0 || st.C[j] != 0) return false;
        }
        return true;
    };
    if (!rational_steps(*Tx) || !rational_steps(*Ty))
        throw UnsupportedField("compositum of towers with non-rational steps");

    TowerPtr T = Tx;
    // images of Ty's generators inside the growing compositum
    std::vector<AlgNum> images;
    for (size_t i = 0; i < Ty->num_steps(); ++i) {
        const TowerStep& st = Ty->step(i);
        Rat B0 = st.B[0], C0 = st.C[0];
        Rat disc = B0 * B0 - 4 * C0;
        AlgNum discT = T->from_rational(disc);
        auto w = sqrt_in_field(discT);
        if (!w) {
            // genuinely new step
            size_t d = T->degree();
            Coords B(d), C(d);
            B[0] = B0;
            C[0] = C0;
            T = FieldTower::extend(T, st.name, std::move(B), std::move(C), st.hint_re, st.hint_im);
            for (auto& img : images) img = img.lift_to(T);
            images.push_back(T->gen(T->num_steps() - 1));
            continue;
        }
        // the step collapses: pick the root matching Ty's hint
        AlgNum c1 = (*w - T->from_rational(B0)) * Rat(1, 2);
        AlgNum c2 = (-*w - T->from_rational(B0)) * Rat(1, 2);
        mpfr_prec_t prec = 128;
        const AlgNum* chosen = nullptr;
        while (!chosen) {
            ComplexInterval hint(RealInterval::from_double(st.hint_re, prec),
                                 RealInterval::from_double(st.hint_im, prec));
            RealInterval d1 = (c1.embed(prec) - hint).norm2();
            RealInterval d2 = (c2.embed(prec) - hint).norm2();
            if (d1.certainly_less(d2)) chosen = &c1;
            else if (d2.certainly_less(d1)) chosen = &c2;
            else if (prec >= 4096) throw PrecisionExhausted("compositum root matching");
            else prec *= 2;
        }
        images.push_back(*chosen);
    }
    // map y
    AlgNum ym = T->zero();
    const Coords& yc = y.coords();
    for (size_t m = 0; m < yc.size(); ++m) {
        if (yc[m] == 0) continue;
        AlgNum mono = T->one();
        for (size_t i = 0; i < images.size(); ++i)
            if ((m >> i) & 1) mono = mono * images[i];
        ym = ym + mono * yc[m];
    }
    return {x.lift_to(T), ym};
}

} // namespace sl2spec
