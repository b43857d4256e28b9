#include "sl2spec/relations.hpp"
#include "sl2spec/errors.hpp"
#include "sl2spec/lll.hpp"

#include <algorithm>
#include <map>

namespace sl2spec {

std::optional<CandidateRelation> integer_relation_probe(const std::vector<RealInterval>& values,
                                                        const Int& coeff_bound,
                                                        mpfr_prec_t precision_bits) {
    if (values.size() < 2) throw Error("integer_relation_probe needs >= 2 values");
    if (coeff_bound < 1) throw Error("coeff_bound must be >= 1");
    const size_t n = values.size();

    // the inputs must actually carry `precision_bits` of information
    for (const auto& v : values)
        if (!v.width_below_pow2(-static_cast<long>(precision_bits)))
            throw PrecisionExhausted("integer_relation_probe: input interval too wide");

    std::vector<std::vector<Int>> basis(n, std::vector<Int>(n + 1, Int(0)));
    Real scaled(precision_bits + 64);
    for (size_t i = 0; i < n; ++i) {
        basis[i][i] = 1;
        Real m = values[i].mid();
        mpfr_mul_2si(scaled.get(), m.get(), static_cast<long>(precision_bits), MPFR_RNDN);
        Int z;
        mpfr_get_z(z.get_mpz_t(), scaled.get(), MPFR_RNDN);
        basis[i][n] = z;
    }
    lll_reduce(basis);

    for (const auto& row : basis) {
        bool zero = true, bounded = true;
        for (size_t i = 0; i < n; ++i) {
            if (row[i] != 0) zero = false;
            if (abs(row[i]) > coeff_bound) bounded = false;
        }
        if (zero || !bounded) continue;
        RealInterval residual(Rat(0), values[0].prec());
        for (size_t i = 0; i < n; ++i) {
            if (row[i] == 0) continue;
            residual = residual + values[i] * RealInterval(Rat(row[i]), values[i].prec());
        }
        if (!residual.contains_zero()) continue;
        if (!residual.width_below_pow2(16 - static_cast<long>(precision_bits))) continue;
        CandidateRelation rel;
        rel.coefficients.assign(row.begin(), row.begin() + n);
        rel.residual = residual;
        return rel;
    }
    return std::nullopt;
}

Rat simplest_rational_in(const Rat& lo, const Rat& hi) {
    if (lo > hi) throw Error("simplest_rational_in: empty interval");
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
    if (Rat(fl) == lo) return lo;
    if (Rat(fl + 1) <= hi) return Rat(fl + 1);
    // no integer inside; recurse on the reciprocal of the fractional parts
    Rat sub = simplest_rational_in(Rat(1) / (hi - Rat(fl)), Rat(1) / (lo - Rat(fl)));
    return Rat(fl) + Rat(1) / sub;
}

namespace {

// Farey neighbors of reduced p/q at order Q >= q: the closest rationals with
// denominator <= Q on either side.
std::pair<Rat, Rat> farey_neighbors(const Rat& r, const Int& Q) {
    Int p = r.get_num(), q = r.get_den();
    auto neighbor = [&](int side) { // side=+1: right (p'q - pq' = 1)
        if (q == 1) return Rat(p * Q + side, Q);
        Int pinv;
        if (mpz_invert(pinv.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t()) == 0)
            throw Error("farey: non-invertible numerator");
        Int q0 = (-side * pinv) % q;
        if (q0 < 0) q0 += q;
        if (q0 == 0) q0 = q;
        Int qp = q0 + q * ((Q - q0) / q);
        Int pp = (Int(side) + p * qp) / q;
        return Rat(pp, qp);
    };
    return {neighbor(-1), neighbor(+1)};
}

} // namespace

std::optional<Rat> rational_from_interval(const RealInterval& v, const Int& max_den) {
    if (max_den < 1) throw Error("max_den must be >= 1");
    Rat lo = v.lo_rat(), hi = v.hi_rat();
    Rat r = simplest_rational_in(lo, hi);
    if (r.get_den() > max_den) return std::nullopt;
    auto [left, right] = farey_neighbors(r, max_den);
    if (left >= lo || right <= hi)
        throw AmbiguousInterval("several rationals with denominator <= " + max_den.get_str());
    return r;
}

std::optional<AlgNum> recognize_algebraic(const ComplexInterval& v, const TowerPtr& K,
                                          const Int& height_bound,
                                          const std::function<bool(const AlgNum&)>& verify) {
    if (height_bound < 1) throw Error("height_bound must be >= 1");
    // A box can only identify a candidate of height H if it is narrower than
    // the typical spacing of such candidates; refuse otherwise.
    long hbits = static_cast<long>(mpz_sizeinbase(height_bound.get_mpz_t(), 2));
    long need = 2 * hbits + 16;
    if (!v.width_below_pow2(-need)) return std::nullopt;

    // working precision derived from the box width
    mpfr_prec_t prec = std::max<mpfr_prec_t>(128, v.prec());
    Real wre = v.re().width(), wim = v.im().width();
    mpfr_srcptr wider = mpfr_greater_p(wre.get(), wim.get()) ? wre.get() : wim.get();
    if (!mpfr_zero_p(wider))
        prec = std::max<mpfr_prec_t>(128, -mpfr_get_exp(wider) + 32);
    auto cand = algebraic_reconstruct(v, K, height_bound, prec);
    if (!cand) return std::nullopt;
    for (const Rat& c : cand->coords())
        if (abs(c.get_num()) > height_bound || c.get_den() > height_bound) return std::nullopt;
    if (!cand->embed(prec).overlaps(v)) return std::nullopt;
    if (verify && !verify(*cand)) return std::nullopt;
    return cand;
}

ShiftResult find_recurrent_shift(std::span<const int32_t> prefix, size_t window,
                                 size_t alphabet_size) {
    if (prefix.empty() || window == 0) throw EmptyInput();
    if (window > prefix.size()) throw Error("window exceeds prefix length");

    // dense symbol ids in first-appearance order
    std::map<int32_t, size_t> id;
    std::vector<int32_t> symbols;
    std::vector<size_t> seq(window);
    for (size_t i = 0; i < window; ++i) {
        auto [it, fresh] = id.emplace(prefix[i], symbols.size());
        if (fresh) symbols.push_back(prefix[i]);
        seq[i] = it->second;
    }
    size_t alpha = alphabet_size ? alphabet_size : symbols.size();
    if (alpha < symbols.size())
        throw Error("alphabet_size smaller than the number of distinct symbols");

    size_t k = symbols.size();
    std::vector<unsigned long> counts(alpha * k, 0);
    for (size_t n = 1; n <= alpha && n < window; ++n)
        for (size_t x = 0; x + n < window; ++x)
            if (seq[x] == seq[x + n]) ++counts[(n - 1) * k + seq[x]];

    ShiftResult best;
    bool first = true;
    for (size_t n = 1; n <= alpha; ++n)
        for (size_t s = 0; s < k; ++s) {
            unsigned long h = (n < window) ? counts[(n - 1) * k + s] : 0;
            bool better = first || h > best.hits ||
                          (h == best.hits && n < best.shift);
            // same hits and shift: earlier symbol wins, which the loop order
            // already guarantees
            if (better) {
                best.symbol = symbols[s];
                best.shift = static_cast<unsigned>(n);
                best.hits = h;
                first = false;
            }
        }
    return best;
}

} // namespace sl2spec
