#ifndef SL2SPEC_MULTDEP_HPP
#define SL2SPEC_MULTDEP_HPP

#include <optional>
#include <string>

#include "sl2spec/numfield.hpp"

namespace sl2spec {

// Outcome of the multiplicative (in)dependence decision for a pair (x, y).
// Dependent(p, q) means x^q = y^p, verified exactly. Independence carries a
// machine-checkable certificate; BoundedIndependent(B) is the honest "no
// relation with reduced ratio denominator <= B was found" verdict.
struct DependenceVerdict {
    enum class Kind { Dependent, Independent, BoundedIndependent, Unresolved };
    enum class Certificate {
        None,
        NonParallelValuations,
        DistinctQuadraticFields,
        NonParallelLogs,
        CandidateRefuted,
    };

    Kind kind = Kind::Unresolved;
    Certificate certificate = Certificate::None;
    Int p = 0, q = 0;          // Dependent: x^q = y^p
    Int cand_p = 0, cand_q = 0; // CandidateRefuted: the forced ratio p0/q0
    Int bound = 0;             // BoundedIndependent
    std::string detail;

    bool dependent() const { return kind == Kind::Dependent; }
    bool independent() const { return kind == Kind::Independent; }
    std::string kind_str() const;
    std::string certificate_str() const;
};

// Exact multiplicative order if x is a root of unity, else nullopt.
std::optional<unsigned long> is_root_of_unity(const AlgNum& x);

DependenceVerdict mult_dependence(const AlgNum& x, const AlgNum& y);

// Re-run the exact checks backing a verdict; throws on failure. Used by the
// CLI --verify replay.
void verify_verdict(const AlgNum& x, const AlgNum& y, const DependenceVerdict& v);

struct ModRootsRelation {
    Int p, q;   // x^q = y^p * w, q >= 1
    AlgNum w;   // root of unity in the common tower
};

std::optional<ModRootsRelation> mult_dependence_mod_roots(const AlgNum& x, const AlgNum& y);

// rho_K(x): the largest n such that x is an n-th power times a root of unity
// in K. Requires x nonzero and not a root of unity.
unsigned long rho(const AlgNum& x);

Rat theta_generator(const AlgNum& x); // 1 / rho(x)

struct RhoExtension {
    unsigned long rho_K, rho_L;
    unsigned long s; // rho_L / rho_K
    bool verified;   // s divides [L:K]
};

// x must lie in K, K a prefix of L.
RhoExtension rho_extension_check(const AlgNum& x, const TowerPtr& K, const TowerPtr& L);

// Fundamental unit (> 1) of the real quadratic field Q(sqrt(m)), m squarefree
// positive non-square, as an element of the given tower whose top step is
// sqrt(m)-compatible. Exposed for tests.
AlgNum fundamental_unit(const TowerPtr& K);

} // namespace sl2spec

#endif
