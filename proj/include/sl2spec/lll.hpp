#ifndef SL2SPEC_LLL_HPP
#define SL2SPEC_LLL_HPP

#include <vector>

#include "sl2spec/rational.hpp"

namespace sl2spec {

// In-place LLL reduction of the rows of `basis` (exact rational
// Gram-Schmidt, Lovasz parameter delta). Rows must be linearly independent.
// Dimensions here are small (<= ~20), so the textbook algorithm is fine.
void lll_reduce(std::vector<std::vector<Int>>& basis, const Rat& delta = Rat(99, 100));

} // namespace sl2spec

#endif
