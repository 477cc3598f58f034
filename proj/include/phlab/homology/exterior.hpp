#pragma once

#include "phlab/core/integer_matrix.hpp"

#include <vector>

namespace phlab {

/// All k-subsets of {0, ..., n-1} in lexicographic order; the basis
/// e_{i1} ^ ... ^ e_{ik} of the k-th exterior power is indexed this way.
std::vector<std::vector<int>> k_subsets(int n, int k);

/// Induced action on H_k(T^n, R) = Lambda^k R^n of a linear toral map.
struct HomologyAction {
  IntegerMatrix base;
  int degree;
  IntegerMatrix matrix;  // C(n,k) x C(n,k), entries are k x k minors of base
};

/// Throws std::invalid_argument unless 1 <= k <= n.
HomologyAction exterior_power(const IntegerMatrix& a, int k);

}  // namespace phlab
