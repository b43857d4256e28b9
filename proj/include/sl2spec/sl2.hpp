#ifndef SL2SPEC_SL2_HPP
#define SL2SPEC_SL2_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sl2spec/numfield.hpp"

namespace sl2spec {

// Exact 2x2 matrix over a field tower with det = 1.
class Mat2 {
  public:
    Mat2() = default;
    Mat2(AlgNum a, AlgNum b, AlgNum c, AlgNum d, bool check_det = true);
    static Mat2 identity(const TowerPtr& K);

    const AlgNum& a() const { return a_; }
    const AlgNum& b() const { return b_; }
    const AlgNum& c() const { return c_; }
    const AlgNum& d() const { return d_; }
    const TowerPtr& tower() const { return a_.tower(); }

    Mat2 operator*(const Mat2& o) const;
    Mat2 inverse() const;
    AlgNum trace() const { return a_ + d_; }
    AlgNum det() const { return a_ * d_ - b_ * c_; }
    bool operator==(const Mat2& o) const;
    bool is_identity() const;
    bool is_minus_identity() const;
    Mat2 lift_to(const TowerPtr& bigger) const;

    std::string str() const;

  private:
    AlgNum a_, b_, c_, d_;
};

struct GeneratorSet {
    std::vector<std::pair<std::string, Mat2>> gens;
    bool assume_free = true;
    const TowerPtr& tower() const { return gens.at(0).second.tower(); }
};

// Freely reduced word: letters are (generator index, exponent +-1).
struct WordSpec {
    std::vector<std::pair<size_t, int>> letters;
    bool empty() const { return letters.empty(); }
    size_t length() const { return letters.size(); }
    std::string str(const GeneratorSet& gens) const;
    std::string str() const; // A, a = A^-1, B, b, ...
};

enum class WordMode { All, ConjugacyReps };

// All freely reduced words of length <= max_len in shortlex order (identity
// first). ConjugacyReps keeps only cyclically reduced words minimal in their
// orbit under rotation and inversion: exact conjugacy classes when the group
// is free on the generators, a deduplication heuristic otherwise.
void enumerate_words(const GeneratorSet& gens, size_t max_len, WordMode mode,
                     const std::function<void(const WordSpec&, const Mat2&)>& sink);

// convenience collector
std::vector<std::pair<WordSpec, Mat2>> enumerate_words_vec(const GeneratorSet& gens,
                                                           size_t max_len, WordMode mode);

enum class ElementClass {
    Identity,
    MinusIdentity,
    Parabolic,
    EllipticTorsion,
    EllipticIrrational,
    Loxodromic,
};

struct EigenData {
    AlgNum trace;              // in the matrix tower K
    AlgNum lambda;             // in `lambda_tower` (K or one quadratic step up)
    TowerPtr lambda_tower;
    ElementClass cls;
    unsigned long torsion_order = 0; // set for EllipticTorsion
    std::string class_str() const;
};

// Eigenvalue data with the |lambda| >= 1 representative, exact classification.
EigenData eigen(const Mat2& M);

// P with P*M*P^(-1) = diag(lambda, lambda^-1) exactly, det P = 1.
// Throws NotSemisimpleDistinct for +-I and parabolic inputs.
Mat2 centralizer_diagonalizer(const Mat2& M);

// certified |a*d| (the section-2.4 rho function; named differently to avoid
// the clash with the rho invariant)
RealInterval diag_product_abs(const Mat2& M, mpfr_prec_t precision);

// Smallest prefix of the configured tower containing all matrix entries.
TowerPtr trace_field(const GeneratorSet& gens);

} // namespace sl2spec

#endif
