#include "sl2spec/multdep.hpp"
#include "sl2spec/errors.hpp"
#include "sl2spec/relations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sl2spec {

namespace {

constexpr mpfr_prec_t kPrecLadderStart = 128;
constexpr mpfr_prec_t kPrecLadderMax = 4096;
const long kLogRatioDenBound = 1000000; // reconstruction bound for log ratios

Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

} // namespace

std::string DependenceVerdict::kind_str() const {
    switch (kind) {
        case Kind::Dependent: return "dependent";
        case Kind::Independent: return "independent";
        case Kind::BoundedIndependent: return "bounded-independent";
        default: return "unresolved";
    }
}

std::string DependenceVerdict::certificate_str() const {
    switch (certificate) {
        case Certificate::NonParallelValuations: return "non-parallel-valuations";
        case Certificate::DistinctQuadraticFields: return "distinct-quadratic-fields";
        case Certificate::NonParallelLogs: return "non-parallel-logs";
        case Certificate::CandidateRefuted: return "candidate-refuted";
        default: return "none";
    }
}

std::optional<unsigned long> is_root_of_unity(const AlgNum& x) {
    if (x.is_zero()) throw Error("is_root_of_unity(0)");
    // quick reject: |x| certified != 1
    RealInterval a = x.embed(96).abs();
    if (!a.contains(Rat(1))) return std::nullopt;
    unsigned long d = static_cast<unsigned long>(x.tower()->degree());
    for (unsigned long n : phi_bounded_orders(d))
        if (x.pow(static_cast<long>(n)).is_one()) return n;
    return std::nullopt;
}

namespace {

// ---- helpers for the unit branches ----

struct QuadraticFieldId {
    bool is_quadratic = false;
    Int core; // squarefree core of the minpoly discriminant
};

QuadraticFieldId quadratic_field_id(const AlgNum& x) {
    QPoly f = minimal_polynomial(x);
    QuadraticFieldId id;
    if (f.degree() != 2) return id;
    Rat disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0) * f.coeff(2);
    // squarefree core of num*den (same field as sqrt(disc))
    Int nd = Int(disc.get_num()) * Int(disc.get_den());
    id.is_quadratic = true;
    id.core = squarefree_decompose(nd).first;
    return id;
}

// certified log|x| under embedding #idx
RealInterval log_abs_at(const AlgNum& x, size_t idx, mpfr_prec_t prec) {
    ComplexInterval e = x.embed_at(idx, prec);
    RealInterval n2 = e.norm2();
    if (!n2.certainly_positive()) throw PrecisionExhausted("log of value near zero");
    return n2.log().scaled_2exp(-1);
}

// ratio = target/denom as a rational with denominator <= bound, by interval
// reconstruction at escalating precision; nullopt when none exists up to the
// bound (certified at the final precision) or precision runs out.
struct RatioResult {
    std::optional<Rat> ratio;
    bool exhausted = false;
};

RatioResult reconstruct_log_ratio(const AlgNum& x, const AlgNum& y, size_t emb_idx,
                                  const Int& den_bound) {
    for (mpfr_prec_t prec = 256; prec <= kPrecLadderMax; prec *= 2) {
        try {
            RealInterval lx = log_abs_at(x, emb_idx, prec);
            RealInterval ly = log_abs_at(y, emb_idx, prec);
            if (ly.contains_zero()) { continue; }
            RealInterval r = lx / ly;
            auto q = rational_from_interval(r, den_bound);
            if (q) return {q, false};
            // interval tight but holds no small rational: certified none at
            // this width; tighten once more to be safe, then report none
            if (prec >= 1024) return {std::nullopt, false};
        } catch (const AmbiguousInterval&) {
            // widen precision and retry
        } catch (const PrecisionExhausted&) {
        }
    }
    return {std::nullopt, true};
}

DependenceVerdict dependent_verdict(const Int& p, const Int& q) {
    DependenceVerdict v;
    v.kind = DependenceVerdict::Kind::Dependent;
    v.p = p;
    v.q = q;
    return v;
}

// proportionality p0/q0 with q0*vx = p0*vy; nullopt if non-proportional
std::optional<std::pair<Int, Int>> valuation_ratio(const ValuationVector& vx,
                                                   const ValuationVector& vy) {
    if (vx.entries.size() != vy.entries.size()) return std::nullopt;
    auto it = vy.entries.begin();
    Int p0 = 0, q0 = 0;
    for (auto& [P, v] : vx.entries) {
        if (!(it->first == P)) return std::nullopt;
        if (p0 == 0 && q0 == 0) {
            p0 = v;
            q0 = it->second;
            Int g = gcd_int(abs(p0), abs(q0));
            p0 /= g;
            q0 /= g;
            if (q0 < 0) { p0 = -p0; q0 = -q0; }
        } else if (q0 * v != p0 * it->second) {
            return std::nullopt;
        }
        ++it;
    }
    return std::make_pair(p0, q0);
}

} // namespace

DependenceVerdict mult_dependence(const AlgNum& x0, const AlgNum& y0) {
    if (x0.is_zero() || y0.is_zero()) throw Error("mult_dependence requires nonzero inputs");

    // (1) roots of unity are dependent with everything (tower-local tests)
    if (auto ord = is_root_of_unity(x0)) {
        auto v = dependent_verdict(Int(0), Int(static_cast<long>(*ord)));
        v.detail = "x is a root of unity of order " + std::to_string(*ord);
        return v;
    }
    if (auto ord = is_root_of_unity(y0)) {
        auto v = dependent_verdict(Int(static_cast<long>(*ord)), Int(0));
        v.detail = "y is a root of unity of order " + std::to_string(*ord);
        return v;
    }

    // (2) valuation vectors; unit-ness is decided in each element's own
    // tower so that no compositum factorization is needed for it
    ValuationVector vx0 = factor_principal(x0), vy0 = factor_principal(y0);
    if (vx0.is_empty() != vy0.is_empty()) {
        // a relation x^Q = y^P with exactly one side a unit forces Q = 0 or
        // P = 0, hence torsion of the other side, which step (1) excluded
        DependenceVerdict v;
        v.kind = DependenceVerdict::Kind::Independent;
        v.certificate = DependenceVerdict::Certificate::NonParallelValuations;
        v.detail = "exactly one of the valuation vectors vanishes";
        return v;
    }
    if (!vx0.is_empty()) {
        auto [x, y] = coerce_common(x0, y0);
        ValuationVector vx = x.tower()->same_structure(*x0.tower()) ? vx0 : factor_principal(x);
        ValuationVector vy = y.tower()->same_structure(*y0.tower()) ? vy0 : factor_principal(y);
        auto ratio = valuation_ratio(vx, vy);
        if (!ratio) {
            DependenceVerdict v;
            v.kind = DependenceVerdict::Kind::Independent;
            v.certificate = DependenceVerdict::Certificate::NonParallelValuations;
            v.detail = "valuation vectors are exactly non-proportional";
            return v;
        }
        auto [p0, q0] = *ratio;
        // Any relation x^Q = y^P forces Q*v(x) = P*v(y), hence (P, Q) is an
        // integer multiple of (p0, q0); so z = x^q0 * y^(-p0) satisfies
        // z^t = 1 for some t != 0 under any relation. Refuting torsion of z
        // therefore refutes all relations at once.
        AlgNum z = x.pow(mpz_get_si(q0.get_mpz_t())) * y.pow(-mpz_get_si(p0.get_mpz_t()));
        if (auto m = is_root_of_unity(z)) {
            long mm = static_cast<long>(*m);
            auto v = dependent_verdict(p0 * mm, q0 * mm);
            v.detail = "z = x^q0 y^-p0 has order " + std::to_string(*m);
            return v;
        }
        DependenceVerdict v;
        v.kind = DependenceVerdict::Kind::Independent;
        v.certificate = DependenceVerdict::Certificate::CandidateRefuted;
        v.cand_p = p0;
        v.cand_q = q0;
        v.detail = "forced ratio " + p0.get_str() + "/" + q0.get_str() +
                   " refuted: x^q0*y^-p0 is a unit of infinite order";
        return v;
    }

    // (3) both units of the ring of integers
    QuadraticFieldId fx = quadratic_field_id(x0), fy = quadratic_field_id(y0);
    if (fx.is_quadratic && fy.is_quadratic) {
        if (fx.core != fy.core) {
            // Rational powers of an infinite-order unit of a real quadratic
            // field are irrational, so a relation would force both powers
            // into Q, contradicting infinite order.
            DependenceVerdict v;
            v.kind = DependenceVerdict::Kind::Independent;
            v.certificate = DependenceVerdict::Certificate::DistinctQuadraticFields;
            v.detail = "distinct quadratic fields: cores " + fx.core.get_str() + " and " +
                       fy.core.get_str();
            return v;
        }
        if (fx.core < 0)
            throw Error("infinite-order unit in an imaginary quadratic field");
        // same real quadratic field: x = +-eps^a, y = +-eps^b, so the log
        // ratio is a/b with |a|, |b| <= log(height)/log(golden ratio)
        auto [x, y] = coerce_common(x0, y0);
        RealInterval lx = x.embed(128).log_abs().abs();
        RealInterval ly = y.embed(128).log_abs().abs();
        double bound_d = std::max(lx.hi().to_double(), ly.hi().to_double()) / 0.4812 + 2;
        Int den_bound(static_cast<long>(bound_d) + 1);
        auto rr = reconstruct_log_ratio(x, y, 0, den_bound);
        if (rr.ratio) {
            Int a0 = rr.ratio->get_num(), b0 = rr.ratio->get_den();
            AlgNum z = x.pow(mpz_get_si(b0.get_mpz_t())) * y.pow(-mpz_get_si(a0.get_mpz_t()));
            if (auto m = is_root_of_unity(z)) {
                long mm = static_cast<long>(*m);
                auto v = dependent_verdict(a0 * mm, b0 * mm);
                v.detail = "same quadratic unit field, log ratio " + rr.ratio->get_str();
                return v;
            }
        }
        DependenceVerdict v;
        v.kind = DependenceVerdict::Kind::Unresolved;
        v.detail = "same-field unit ratio reconstruction failed";
        return v;
    }

    // general unit case: compare log vectors across all embeddings
    auto [x, y] = coerce_common(x0, y0);
    size_t nemb = x.tower()->degree();
    for (mpfr_prec_t prec = kPrecLadderStart; prec <= kPrecLadderMax; prec *= 2) {
        try {
            std::vector<RealInterval> lx, ly;
            for (size_t i = 0; i < nemb; ++i) {
                lx.push_back(log_abs_at(x, i, prec));
                ly.push_back(log_abs_at(y, i, prec));
            }
            for (size_t i = 0; i < nemb; ++i)
                for (size_t j = i + 1; j < nemb; ++j) {
                    RealInterval det = lx[i] * ly[j] - lx[j] * ly[i];
                    if (!det.contains_zero()) {
                        DependenceVerdict v;
                        v.kind = DependenceVerdict::Kind::Independent;
                        v.certificate = DependenceVerdict::Certificate::NonParallelLogs;
                        std::ostringstream os;
                        os << "2x2 log determinant at embeddings (" << i << "," << j
                           << ") excludes zero";
                        v.detail = os.str();
                        return v;
                    }
                }
            break; // all determinants hug zero: proceed to reconstruction
        } catch (const PrecisionExhausted&) {
            if (prec * 2 > kPrecLadderMax) break;
        }
    }
    // log vectors look proportional: reconstruct the unique possible ratio
    size_t idx = 0;
    {
        // find an embedding where log|y| is certifiedly nonzero
        bool found = false;
        for (mpfr_prec_t prec = 256; prec <= kPrecLadderMax && !found; prec *= 2)
            for (size_t i = 0; i < nemb && !found; ++i)
                try {
                    if (!log_abs_at(y, i, prec).contains_zero()) {
                        idx = i;
                        found = true;
                    }
                } catch (const PrecisionExhausted&) {}
        if (!found) {
            DependenceVerdict v;
            v.kind = DependenceVerdict::Kind::Unresolved;
            v.detail = "could not certify a nonzero log embedding for y";
            return v;
        }
    }
    auto rr = reconstruct_log_ratio(x, y, idx, Int(kLogRatioDenBound));
    if (rr.ratio) {
        Int a0 = rr.ratio->get_num(), b0 = rr.ratio->get_den();
        AlgNum z = x.pow(mpz_get_si(b0.get_mpz_t())) * y.pow(-mpz_get_si(a0.get_mpz_t()));
        if (auto m = is_root_of_unity(z)) {
            long mm = static_cast<long>(*m);
            auto v = dependent_verdict(a0 * mm, b0 * mm);
            v.detail = "unit log ratio " + rr.ratio->get_str();
            return v;
        }
    }
    DependenceVerdict v;
    if (rr.exhausted) {
        v.kind = DependenceVerdict::Kind::Unresolved;
        v.detail = "log-ratio reconstruction exhausted the precision ladder";
    } else {
        v.kind = DependenceVerdict::Kind::BoundedIndependent;
        v.bound = kLogRatioDenBound;
        v.detail = "no relation with reduced ratio denominator <= 10^6";
    }
    return v;
}

void verify_verdict(const AlgNum& x0, const AlgNum& y0, const DependenceVerdict& v) {
    switch (v.kind) {
        case DependenceVerdict::Kind::Dependent: {
            if (v.p == 0 && v.q == 0) throw Error("verify: (p,q) = (0,0)");
            auto [x, y] = coerce_common(x0, y0);
            AlgNum lhs = x.pow(mpz_get_si(v.q.get_mpz_t()));
            AlgNum rhs = y.pow(mpz_get_si(v.p.get_mpz_t()));
            if (!(lhs == rhs)) throw Error("verify: x^q != y^p");
            return;
        }
        case DependenceVerdict::Kind::Independent: {
            using C = DependenceVerdict::Certificate;
            if (v.certificate == C::NonParallelValuations) {
                ValuationVector vx = factor_principal(x0), vy = factor_principal(y0);
                if (vx.is_empty() != vy.is_empty()) return;
                if (vx.is_empty()) throw Error("verify: both valuation vectors empty");
                auto [x, y] = coerce_common(x0, y0);
                if (!x.tower()->same_structure(*x0.tower())) vx = factor_principal(x);
                if (!y.tower()->same_structure(*y0.tower())) vy = factor_principal(y);
                if (!valuation_ratio(vx, vy)) return; // exactly non-proportional
                throw Error("verify: valuation vectors are proportional");
            }
            if (v.certificate == C::DistinctQuadraticFields) {
                auto fx = quadratic_field_id(x0), fy = quadratic_field_id(y0);
                if (!fx.is_quadratic || !fy.is_quadratic || fx.core == fy.core)
                    throw Error("verify: quadratic field certificate fails");
                if (!factor_principal(x0).is_empty() || !factor_principal(y0).is_empty())
                    throw Error("verify: certificate requires units");
                if (is_root_of_unity(x0) || is_root_of_unity(y0))
                    throw Error("verify: certificate requires infinite order");
                return;
            }
            if (v.certificate == C::NonParallelLogs) {
                auto [x, y] = coerce_common(x0, y0);
                size_t nemb = x.tower()->degree();
                for (mpfr_prec_t prec = kPrecLadderStart; prec <= kPrecLadderMax; prec *= 2) {
                    for (size_t i = 0; i < nemb; ++i)
                        for (size_t j = i + 1; j < nemb; ++j) {
                            RealInterval det = log_abs_at(x, i, prec) * log_abs_at(y, j, prec) -
                                               log_abs_at(x, j, prec) * log_abs_at(y, i, prec);
                            if (!det.contains_zero()) return;
                        }
                }
                throw Error("verify: no log determinant excludes zero");
            }
            if (v.certificate == C::CandidateRefuted) {
                auto [x, y] = coerce_common(x0, y0);
                AlgNum z = x.pow(mpz_get_si(v.cand_q.get_mpz_t())) *
                           y.pow(-mpz_get_si(v.cand_p.get_mpz_t()));
                if (is_root_of_unity(z)) throw Error("verify: refuted candidate is torsion");
                ValuationVector vx = factor_principal(x), vy = factor_principal(y);
                auto ratio = valuation_ratio(vx, vy);
                if (!ratio || ratio->first != v.cand_p || ratio->second != v.cand_q)
                    throw Error("verify: candidate ratio mismatch");
                return;
            }
            throw Error("verify: independent verdict without certificate");
        }
        default:
            return; // nothing exact to replay
    }
}

std::optional<ModRootsRelation> mult_dependence_mod_roots(const AlgNum& x0, const AlgNum& y0) {
    if (x0.is_zero() || y0.is_zero())
        throw Error("mult_dependence_mod_roots requires nonzero inputs");
    auto [x, y] = coerce_common(x0, y0);

    auto finish = [&](Int p, Int q, AlgNum w) -> std::optional<ModRootsRelation> {
        if (q < 0) { // normalize to q >= 1
            p = -p;
            q = -q;
            w = w.inverse();
        }
        if (q == 0) return std::nullopt;
        // exact check x^q = y^p * w
        if (!(x.pow(mpz_get_si(q.get_mpz_t())) ==
              y.pow(mpz_get_si(p.get_mpz_t())) * w))
            throw Error("mod-roots relation failed exact verification");
        return ModRootsRelation{p, q, w};
    };

    if (is_root_of_unity(x)) return finish(Int(0), Int(1), x);
    if (is_root_of_unity(y)) return std::nullopt; // x^q torsion is impossible

    // unit-ness decided in the original towers, as in mult_dependence
    ValuationVector vx0 = factor_principal(x0), vy0 = factor_principal(y0);
    if (vx0.is_empty() != vy0.is_empty()) return std::nullopt;
    if (!vx0.is_empty()) {
        ValuationVector vx = x.tower()->same_structure(*x0.tower()) ? vx0 : factor_principal(x);
        ValuationVector vy = y.tower()->same_structure(*y0.tower()) ? vy0 : factor_principal(y);
        auto ratio = valuation_ratio(vx, vy);
        if (!ratio) return std::nullopt;
        auto [p0, q0] = *ratio;
        AlgNum z = x.pow(mpz_get_si(q0.get_mpz_t())) * y.pow(-mpz_get_si(p0.get_mpz_t()));
        if (is_root_of_unity(z)) return finish(p0, q0, z);
        return std::nullopt;
    }
    // units: reuse the plain machinery and recover w
    DependenceVerdict v = mult_dependence(x, y);
    if (v.kind != DependenceVerdict::Kind::Dependent) return std::nullopt;
    // v gives x^q = y^p with (p, q) = m*(p0, q0); the mod-roots witness is
    // z = x^q0 y^-p0 itself
    Int m = gcd_int(abs(v.p), abs(v.q));
    if (m == 0) return std::nullopt;
    Int p0 = v.p / m, q0 = v.q / m;
    AlgNum z = x.pow(mpz_get_si(q0.get_mpz_t())) * y.pow(-mpz_get_si(p0.get_mpz_t()));
    if (!is_root_of_unity(z)) return std::nullopt;
    return finish(p0, q0, z);
}

// ------------------------------------------------------------------- rho

namespace {

// all exact m-th roots of y in K found via numeric candidates (odd m)
std::vector<AlgNum> nth_roots_in_field(const AlgNum& y, unsigned long m) {
    std::vector<AlgNum> out;
    const TowerPtr& K = y.tower();
    for (mpfr_prec_t prec : {mpfr_prec_t(256), mpfr_prec_t(512), mpfr_prec_t(1024)}) {
        ComplexInterval box = y.embed(prec);
        Real re = box.re().mid(), im = box.im().mid();
        mpfr_prec_t w = std::max<mpfr_prec_t>(prec, 256);
        Real mod(w), ang(w);
        mpfr_hypot(mod.get(), re.get(), im.get(), MPFR_RNDN);
        mpfr_atan2(ang.get(), im.get(), re.get(), MPFR_RNDN);
        Real rootmod(w);
        mpfr_rootn_ui(rootmod.get(), mod.get(), m, MPFR_RNDN);
        Real two_pi(w);
        mpfr_const_pi(two_pi.get(), MPFR_RNDN);
        mpfr_mul_2ui(two_pi.get(), two_pi.get(), 1, MPFR_RNDN);
        for (unsigned long k = 0; k < m; ++k) {
            Real theta(w), c(w), s(w), rr(w), ri(w);
            mpfr_mul_ui(theta.get(), two_pi.get(), k, MPFR_RNDN);
            mpfr_add(theta.get(), theta.get(), ang.get(), MPFR_RNDN);
            mpfr_div_ui(theta.get(), theta.get(), m, MPFR_RNDN);
            mpfr_sin_cos(s.get(), c.get(), theta.get(), MPFR_RNDN);
            mpfr_mul(rr.get(), rootmod.get(), c.get(), MPFR_RNDN);
            mpfr_mul(ri.get(), rootmod.get(), s.get(), MPFR_RNDN);
            // pad the point estimate into a small box
            Real plo(w), phi(w);
            mpfr_set_ui_2exp(phi.get(), 1, -static_cast<long>(prec) + 16, MPFR_RNDU);
            mpfr_neg(plo.get(), phi.get(), MPFR_RNDD);
            RealInterval eps = RealInterval::make(plo, phi);
            ComplexInterval cand_box(RealInterval::make(rr, rr) + eps,
                                     RealInterval::make(ri, ri) + eps);
            auto cand = algebraic_reconstruct(cand_box, K, Int(1) << 48, prec);
            if (!cand) continue;
            if (cand->pow(static_cast<long>(m)) == y) {
                bool dup = false;
                for (auto& r : out)
                    if (r == *cand) dup = true;
                if (!dup) out.push_back(*cand);
            }
        }
        if (!out.empty()) break;
    }
    return out;
}

// exact test: does y have a 2^j-th root in K (branching over square root signs)
bool has_pow2_root(const AlgNum& y, unsigned long j) {
    if (j == 0) return true;
    auto s = sqrt_in_field(y);
    if (!s) return false;
    return has_pow2_root(*s, j - 1) || has_pow2_root(-*s, j - 1);
}

bool exists_root_times_torsion(const AlgNum& x, unsigned long n, const RootsOfUnityGroup& W) {
    unsigned long j = 0, m = n;
    while (m % 2 == 0) {
        m /= 2;
        ++j;
    }
    for (const AlgNum& w : W.elements()) {
        AlgNum y = x * w;
        if (m == 1) {
            if (has_pow2_root(y, j)) return true;
        } else {
            for (const AlgNum& g : nth_roots_in_field(y, m))
                if (has_pow2_root(g, j)) return true;
        }
    }
    return false;
}

std::vector<unsigned long> divisors_desc(const Int& g) {
    if (g > 1000000) throw Error("rho: valuation exponent gcd too large for root search");
    unsigned long gi = mpz_get_ui(g.get_mpz_t());
    std::vector<unsigned long> out;
    for (unsigned long d = 1; d * d <= gi; ++d) {
        if (gi % d) continue;
        out.push_back(d);
        if (d != gi / d) out.push_back(gi / d);
    }
    std::sort(out.rbegin(), out.rend());
    return out;
}

} // namespace

AlgNum fundamental_unit(const TowerPtr& K) {
    if (K->num_steps() != 1) throw UnsupportedUnitCase();
    Rat B0 = K->step(0).B[0], C0 = K->step(0).C[0];
    Rat disc = B0 * B0 - 4 * C0;
    if (disc <= 0) throw Error("fundamental_unit: not a real quadratic field");
    auto [core, scale] = squarefree_decompose(Int(disc.get_num()) * Int(disc.get_den()));
    Int m = core;
    if (m <= 1) throw Error("fundamental_unit: degenerate field");

    // continued fraction of sqrt(m); first convergent with h^2 - m k^2 = +-1
    Int a0;
    mpz_sqrt(a0.get_mpz_t(), m.get_mpz_t());
    Int P = 0, Q = 1, a = a0;
    Int h_prev = 1, h = a0, k_prev = 0, k = 1;
    Int eps_h = 0, eps_k = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        Int t = h * h - m * k * k;
        if (t == 1 || t == -1) {
            eps_h = h;
            eps_k = k;
            break;
        }
        P = a * Q - P;
        Q = (m - P * P) / Q;
        a = (a0 + P) / Q;
        Int h2 = a * h + h_prev, k2 = a * k + k_prev;
        h_prev = h;
        h = h2;
        k_prev = k;
        k = k2;
    }
    if (eps_h == 0) throw NonConvergence();

    // express sqrt(m) in tower coordinates: sqrt(disc) = +-(2g + B),
    // disc = (scale/denominator-part)^2 * m
    Rat sqrt_disc_over_sqrt_m(scale, Int(disc.get_den())); // sqrt(disc) = this * sqrt(m)
    AlgNum two_g_plus_B =
        K->gen(0) * Rat(2) + K->from_rational(B0); // = +-sqrt(disc)
    AlgNum sqrt_m = two_g_plus_B * (Rat(1) / sqrt_disc_over_sqrt_m);
    // fix the sign so that sqrt_m embeds positively
    mpfr_prec_t prec = 128;
    while (true) {
        RealInterval re = sqrt_m.embed(prec).re();
        if (re.certainly_positive()) break;
        if (re.certainly_negative()) {
            sqrt_m = -sqrt_m;
            break;
        }
        prec *= 2;
        if (prec > kPrecLadderMax) throw PrecisionExhausted("sign of sqrt(m)");
    }
    AlgNum eps = K->from_rational(Rat(eps_h)) + sqrt_m * Rat(eps_k);

    // for m = 1 mod 4 the maximal order can be larger: try an exact cube root
    if (mpz_fdiv_ui(m.get_mpz_t(), 4) == 1) {
        ComplexInterval box = eps.embed(512);
        Real mid = box.re().mid();
        Real root(512);
        mpfr_rootn_ui(root.get(), mid.get(), 3, MPFR_RNDN);
        Real lo(512), hi(512), pad(512);
        mpfr_set_ui_2exp(pad.get(), 1, -400, MPFR_RNDU);
        mpfr_sub(lo.get(), root.get(), pad.get(), MPFR_RNDD);
        mpfr_add(hi.get(), root.get(), pad.get(), MPFR_RNDU);
        ComplexInterval cbox(RealInterval::make(lo, hi), RealInterval(Rat(0), 512));
        auto cand = algebraic_reconstruct(cbox, K, Int(1) << 200, 480);
        if (cand && cand->pow(3) == eps) eps = *cand;
    }
    return eps;
}

unsigned long rho(const AlgNum& x) {
    if (x.is_zero()) throw Error("rho(0)");
    if (is_root_of_unity(x)) throw RootOfUnityInput();
    const TowerPtr& K = x.tower();
    RootsOfUnityGroup W = roots_of_unity(K);

    ValuationVector v = factor_principal(x);
    if (!v.is_empty()) {
        Int g = 0;
        for (auto& [P, e] : v.entries) g = g == 0 ? abs(Int(e)) : gcd_int(g, abs(Int(e)));
        for (unsigned long n : divisors_desc(g)) {
            if (n == 1) return 1;
            if (exists_root_times_torsion(x, n, W)) return n;
        }
        return 1;
    }

    // unit case
    if (K->degree() > 2) throw UnsupportedUnitCase();
    if (K->degree() == 1) throw RootOfUnityInput(); // rational units are +-1
    AlgNum eps = fundamental_unit(K);

    // x = +-eps^a: a from the log ratio, then verified exactly
    for (mpfr_prec_t prec = 256; prec <= kPrecLadderMax; prec *= 2) {
        RealInterval lx = x.embed(prec).log_abs();
        RealInterval le = eps.embed(prec).log_abs();
        if (le.contains_zero()) continue;
        RealInterval r = lx / le;
        Rat lo = r.lo_rat(), hi = r.hi_rat();
        Int afloor;
        mpz_fdiv_q(afloor.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
        for (Int cand = afloor - 1; cand <= afloor + 2; ++cand) {
            if (Rat(cand) < lo || Rat(cand) > hi) continue;
            long a = mpz_get_si(cand.get_mpz_t());
            if (a == 0) continue;
            AlgNum pa = eps.pow(a);
            if (pa == x || pa == -x || -pa == x)
                return static_cast<unsigned long>(a < 0 ? -a : a);
        }
    }
    throw PrecisionExhausted("rho: unit exponent identification");
}

Rat theta_generator(const AlgNum& x) {
    return Rat(1, static_cast<long>(rho(x)));
}

RhoExtension rho_extension_check(const AlgNum& x, const TowerPtr& K, const TowerPtr& L) {
    if (!L->has_prefix(*K)) throw UnsupportedField("K is not a prefix of L");
    AlgNum xK = x.tower()->same_structure(*K) ? AlgNum(K, x.coords()) : x.lift_to(K);
    AlgNum xL = xK.lift_to(L);
    RhoExtension r;
    r.rho_K = rho(xK);
    r.rho_L = rho(xL);
    if (r.rho_L % r.rho_K) throw Error("rho_L is not a multiple of rho_K");
    r.s = r.rho_L / r.rho_K;
    unsigned long rel_deg = static_cast<unsigned long>(L->degree() / K->degree());
    r.verified = (rel_deg % r.s) == 0;
    return r;
}

} // namespace sl2spec
