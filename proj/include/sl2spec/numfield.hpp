#ifndef SL2SPEC_NUMFIELD_HPP
#define SL2SPEC_NUMFIELD_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sl2spec/interval.hpp"
#include "sl2spec/linalg.hpp"
#include "sl2spec/qpoly.hpp"
#include "sl2spec/rational.hpp"

namespace sl2spec {

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;
class AlgNum;

// One quadratic step t^2 + B t + C over the tower below it. B and C are
// coordinate vectors on the sub-tower's monomial basis and must be integral.
struct TowerStep {
    std::string name;
    std::vector<Rat> B, C;
    double hint_re = 0.0, hint_im = 0.0;
    int root_sign = +1;    // which root of the quadratic the hint selected
    bool gen_real = false; // the chosen root is a real number
};

// Element of a FieldTower: exact rational coordinates on the monomial basis.
class AlgNum {
  public:
    AlgNum() = default;
    AlgNum(TowerPtr tower, std::vector<Rat> coords);

    const TowerPtr& tower() const { return tower_; }
    const std::vector<Rat>& coords() const { return c_; }
    size_t degree() const { return c_.size(); }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    Rat rational_value() const; // pre: is_rational
    bool operator==(const AlgNum& o) const;
    bool operator!=(const AlgNum& o) const { return !(*this == o); }

    AlgNum operator+(const AlgNum& o) const;
    AlgNum operator-(const AlgNum& o) const;
    AlgNum operator*(const AlgNum& o) const;
    AlgNum operator/(const AlgNum& o) const;
    AlgNum operator-() const;
    AlgNum operator*(const Rat& s) const;
    AlgNum inverse() const;
    AlgNum pow(long e) const;

    // Conjugate under the top step automorphism (g_top -> other root).
    AlgNum step_conj() const;
    // Norm down one step: x * step_conj(x), as an element of the base tower.
    AlgNum step_norm() const;

    // True iff every coordinate sits on a real basis monomial.
    bool coordwise_real() const;

    // value under the distinguished embedding; the returned box contains the
    // exact value and has width <= 2^(8 - precision_bits) * max(1, |x|).
    ComplexInterval embed(mpfr_prec_t precision_bits) const;
    // value under embedding #idx (see FieldTower::all_embedding_values)
    ComplexInterval embed_at(size_t idx, mpfr_prec_t precision_bits) const;

    // Lift into `bigger`, of which this element's tower must be a prefix
    // (or structurally equal).
    AlgNum lift_to(const TowerPtr& bigger) const;
    // If the element lies in the prefix with `steps` steps, project it.
    std::optional<AlgNum> project_to_prefix(size_t steps) const;

    std::string str() const;

  private:
    TowerPtr tower_;
    std::vector<Rat> c_;
};

// Tower of quadratic extensions of Q with a distinguished complex embedding.
// Immutable after construction; safe to share across threads.
class FieldTower : public std::enable_shared_from_this<FieldTower> {
  public:
    static TowerPtr rationals();
    // Append one quadratic step; validates integrality, irreducibility and
    // that the root hint selects exactly one root.
    static TowerPtr extend(TowerPtr base, const std::string& name, std::vector<Rat> B,
                           std::vector<Rat> C, double hint_re, double hint_im);
    // Convenience: adjoin sqrt(m) for a squarefree non-square integer m.
    static TowerPtr adjoin_sqrt(TowerPtr base, const Int& m);

    size_t num_steps() const { return steps_; }
    size_t degree() const { return size_t(1) << steps_; }
    const TowerPtr& base() const { return base_; }
    const TowerStep& top() const { return top_; }
    const TowerStep& step(size_t i) const;
    TowerPtr prefix(size_t num_steps) const; // this tower truncated
    bool is_rationals() const { return steps_ == 0; }
    bool is_real() const { return real_; }
    bool same_structure(const FieldTower& o) const;
    // true iff `other` equals a prefix of this tower
    bool has_prefix(const FieldTower& other) const;
    std::string description() const;

    // Generator of step i as an element of this tower.
    AlgNum gen(size_t i) const;
    AlgNum from_rational(const Rat& q) const;
    AlgNum from_coords(std::vector<Rat> coords) const;
    AlgNum zero() const;
    AlgNum one() const;

    // Is basis monomial m (bitmask over steps) a real number?
    bool monomial_real(size_t m) const;

    // --- primitive element (degree >= 2), used by factorization ---
    const AlgNum& primitive_element() const;
    const QPoly& primitive_minpoly() const; // monic, integral
    // coordinates -> polynomial in the primitive element
    QPoly to_primitive_poly(const AlgNum& x) const;

    // --- embeddings ---
    // Monomial values of the distinguished embedding at working precision.
    std::vector<ComplexInterval> monomial_values(mpfr_prec_t prec) const;
    // Monomial values of all 2^k complex embeddings (index 0 = distinguished;
    // bit i of the index flips the root choice at step i).
    std::vector<std::vector<ComplexInterval>> all_embedding_values(mpfr_prec_t prec) const;

    // Complex conjugation as a tower automorphism, if the tower is stable
    // under it (matrix acting on coordinates). Identity for real towers.
    std::optional<MatQ> conjugation() const;
    void require_no_conjugation() const { conj_disabled_ = true; } // config "none"

  private:
    FieldTower() = default;
    TowerPtr base_;
    TowerStep top_;
    size_t steps_ = 0;
    bool real_ = true;

    // caches (value-immutable; built on demand behind a mutex)
    mutable std::mutex mu_;
    mutable std::map<mpfr_prec_t, std::vector<ComplexInterval>> gen_values_;
    mutable std::optional<AlgNum> primitive_;
    mutable std::optional<QPoly> primitive_minpoly_;
    mutable std::optional<MatQ> coords_to_powers_; // columns: theta^j on the basis
    mutable std::optional<std::optional<MatQ>> conj_;
    mutable bool conj_disabled_ = false;

    std::vector<ComplexInterval> gen_values_locked(mpfr_prec_t prec) const;
    void build_primitive_locked() const;
    std::optional<MatQ> build_conjugation() const;

    friend class AlgNum;
};


// nf_arith entry point used by the CLI; op in {add,sub,mul,div,pow}.
AlgNum nf_arith(const AlgNum& x, const AlgNum& y, const std::string& op, long pow_exp = 0);

QPoly minimal_polynomial(const AlgNum& x);

// Exact square root in the tower, if one exists.
std::optional<AlgNum> sqrt_in_field(const AlgNum& x);

struct PrimeIdeal {
    Int p;
    std::vector<Int> residue_poly; // monic irreducible factor of the primitive
                                   // minpoly mod p, constant-term first
    unsigned long e = 1, f = 1;
    Int norm() const { return pow_int(p, f); }
    bool operator<(const PrimeIdeal& o) const;
    bool operator==(const PrimeIdeal& o) const;
    std::string str(const std::string& theta_name = "th") const;
};

struct ValuationVector {
    std::map<PrimeIdeal, long> entries;
    bool is_empty() const { return entries.empty(); } // <=> unit of O_K
    ValuationVector operator+(const ValuationVector& o) const;
    ValuationVector operator-() const;
    ValuationVector scaled(long k) const;
    bool operator==(const ValuationVector& o) const { return entries == o.entries; }
    std::string str(const std::string& theta_name = "th") const;
};

struct RootsOfUnityGroup {
    unsigned long order = 2;
    AlgNum generator; // embeds to exp(2*pi*i/order)
    // all elements generator^j, j = 0..order-1
    std::vector<AlgNum> elements() const;
};

enum class SplittingKind { Split, Inert, Ramified, Mixed };
struct SplittingType {
    std::vector<PrimeIdeal> primes;
    SplittingKind kind;
    std::string kind_str() const;
};

SplittingType splitting_type(const Int& p, const TowerPtr& K);
ValuationVector factor_principal(const AlgNum& x);
RootsOfUnityGroup roots_of_unity(const TowerPtr& K);
bool is_square_residue(const Int& a, const Int& p);
// Image of x in the residue field F_p[t]/(residue_poly); nullopt when x has a
// denominator not invertible mod p. Squareness test in that residue field.
std::optional<bool> is_square_mod_prime(const AlgNum& x, const PrimeIdeal& P);

// Norm from x's tower L down to its immediate base K ([L:K] = 2).
AlgNum relative_norm(const AlgNum& x);

// Coerce both elements into a common tower (prefix lifting, or building the
// compositum when both towers only involve rational quadratic steps).
std::pair<AlgNum, AlgNum> coerce_common(const AlgNum& x, const AlgNum& y);

// LLL-based reconstruction of a tower element from a complex box. Returns a
// candidate whose embedding overlaps the box and whose coordinate heights are
// bounded; exact verification is the caller's responsibility.
std::optional<AlgNum> algebraic_reconstruct(const ComplexInterval& v, const TowerPtr& K,
                                            const Int& height_bound, mpfr_prec_t prec);

} // namespace sl2spec

#endif
