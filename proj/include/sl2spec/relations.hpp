#ifndef SL2SPEC_RELATIONS_HPP
#define SL2SPEC_RELATIONS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sl2spec/interval.hpp"
#include "sl2spec/numfield.hpp"

namespace sl2spec {

struct CandidateRelation {
    std::vector<Int> coefficients; // not all zero
    RealInterval residual;         // contains sum c_i * v_i
};

// Lattice-reduction probe for integer relations among real values given as
// intervals. A null result is NOT an independence proof, only "no relation
// with |c_i| <= coeff_bound detected at this precision".
std::optional<CandidateRelation> integer_relation_probe(const std::vector<RealInterval>& values,
                                                        const Int& coeff_bound,
                                                        mpfr_prec_t precision_bits);

// Unique rational with denominator <= max_den inside the interval, if exactly
// one exists (continued-fraction search). Throws AmbiguousInterval when
// several qualify.
std::optional<Rat> rational_from_interval(const RealInterval& v, const Int& max_den);

// Minimal-denominator rational in the closed interval [lo, hi].
Rat simplest_rational_in(const Rat& lo, const Rat& hi);

// Reconstruct an element of K from a complex box, with exact verification of
// a caller-supplied condition. Refuses boxes too wide to pin a candidate of
// the allowed height (returns nullopt).
std::optional<AlgNum> recognize_algebraic(
    const ComplexInterval& v, const TowerPtr& K, const Int& height_bound,
    const std::function<bool(const AlgNum&)>& verify = nullptr);

struct ShiftResult {
    int32_t symbol = 0;
    unsigned shift = 1;      // N, 1 <= N <= alphabet size
    unsigned long hits = 0;  // #{x < window - N : seq[x] = symbol = seq[x+N]}
};

// Finite-window recurrent-shift search: maximizes hits over all symbols s and
// shifts 1 <= N <= alphabet size; ties broken by smallest N, then by symbol
// first-appearance order. `alphabet_size` 0 means "count distinct symbols".
ShiftResult find_recurrent_shift(std::span<const int32_t> prefix, size_t window,
                                 size_t alphabet_size = 0);

// Allocation-free variant for tight exhaustive loops: symbols must lie in
// [0, alphabet); alphabet <= 16.
inline ShiftResult find_recurrent_shift_small(const uint8_t* seq, size_t window,
                                              unsigned alphabet) {
    unsigned long counts[16 * 16];
    for (unsigned n = 0; n < alphabet; ++n)
        for (unsigned s = 0; s < alphabet; ++s) counts[n * 16 + s] = 0;
    for (unsigned n = 1; n <= alphabet && n < window; ++n) {
        unsigned long* row = counts + (n - 1) * 16;
        for (size_t x = 0; x + n < window; ++x)
            if (seq[x] == seq[x + n]) ++row[seq[x]];
    }
    // first-appearance order for the tie break
    int order[16];
    for (unsigned s = 0; s < alphabet; ++s) order[s] = 1 << 20;
    int seen = 0;
    for (size_t x = 0; x < window && seen < static_cast<int>(alphabet); ++x)
        if (order[seq[x]] == 1 << 20) order[seq[x]] = seen++;
    ShiftResult best;
    bool first = true;
    for (unsigned n = 1; n <= alphabet; ++n)
        for (unsigned s = 0; s < alphabet; ++s) {
            unsigned long h = (n < window) ? counts[(n - 1) * 16 + s] : 0;
            bool better = first || h > best.hits;
            if (!first && h == best.hits) {
                if (n < best.shift) better = true;
                else if (n == best.shift &&
                         order[s] < order[static_cast<unsigned>(best.symbol)])
                    better = true;
            }
            if (better) {
                best.symbol = static_cast<int32_t>(s);
                best.shift = n;
                best.hits = h;
                first = false;
            }
        }
    return best;
}

} // namespace sl2spec

#endif
