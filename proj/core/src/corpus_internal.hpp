#ifndef MARTLAT_CORPUS_INTERNAL_HPP
#define MARTLAT_CORPUS_INTERNAL_HPP

#include <vector>

#include "martlat/corpus.hpp"

namespace martlat::detail {

/// (Ex)_i = sum_{j ~ i} w_j x_j / sum_{j ~ i} w_j, where i ~ j iff block_of[i] == block_of[j].
Matrix conditional_expectation(const std::vector<std::size_t>& block_of, const std::vector<Rational>& weights);

/// Operator acting on R^d through `m` (identity tail, which never sees data in R^d).
Operator finite_level(const Matrix& m);

std::vector<Rational> coords(const ExtSeq& a, std::size_t d);

Assertion make_assertion(AssertionKind k, Json args);

}  // namespace martlat::detail

#endif  // MARTLAT_CORPUS_INTERNAL_HPP
