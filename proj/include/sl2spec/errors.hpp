#ifndef SL2SPEC_ERRORS_HPP
#define SL2SPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sl2spec {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what)
        : Error("precision exhausted: " + what) {}
};

struct NonMonogenicPrime : Error {
    unsigned long p;
    explicit NonMonogenicPrime(unsigned long p_)
        : Error("Dedekind criterion fails at p=" + std::to_string(p_) +
                " and no integral basis is configured"), p(p_) {}
};

struct NotQuadraticStep : Error {
    NotQuadraticStep() : Error("relative norm requires a quadratic top step") {}
};

struct AmbiguousInterval : Error {
    explicit AmbiguousInterval(const std::string& what)
        : Error("ambiguous interval: " + what) {}
};

struct EmptyInput : Error {
    EmptyInput() : Error("empty input") {}
};

struct UnsupportedUnitCase : Error {
    UnsupportedUnitCase()
        : Error("rho for units is supported only in fields of degree <= 2 "
                "(unit-group computation in higher degree is out of scope; "
                "see project notes)") {}
};

struct RootOfUnityInput : Error {
    RootOfUnityInput() : Error("input is a root of unity; rho is infinite") {}
};

struct NotSemisimpleDistinct : Error {
    NotSemisimpleDistinct()
        : Error("matrix is not semisimple with distinct eigenvalues") {}
};

struct UnsupportedField : Error {
    explicit UnsupportedField(const std::string& what)
        : Error("unsupported field: " + what) {}
};

struct DegenerateRelation : Error {
    DegenerateRelation() : Error("degenerate lattice relation (c + d*tau = 0)") {}
};

struct NotLoxodromic : Error {
    NotLoxodromic() : Error("matrix is not loxodromic") {}
};

struct NonConvergence : Error {
    NonConvergence() : Error("numeric minimization did not converge") {}
};

struct ConjugationUnavailable : Error {
    ConjugationUnavailable()
        : Error("tower has no conjugation automorphism and the value is non-real") {}
};

struct InconsistentFlags : Error {
    InconsistentFlags()
        : Error("probe flags form a class of size >= 3, contradicting pairwise "
                "multiplicative independence") {}
};

struct IndependencePreconditionFailed : Error {
    IndependencePreconditionFailed()
        : Error("inputs are not pairwise multiplicatively independent") {}
};

struct BoxTooLarge : Error {
    BoxTooLarge() : Error("enumeration box exceeds the configured budget") {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

} // namespace sl2spec

#endif
