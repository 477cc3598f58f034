#include "phlab/homology/exterior.hpp"

#include <stdexcept>
#include <string>

namespace phlab {

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

HomologyAction exterior_power(const IntegerMatrix& a, int k) {
  const int n = a.size();
  if (k < 1 || k > n) {
    throw std::invalid_argument("exterior power degree must satisfy 1 <= k <= n, got k=" + std::to_string(k) +
                                ", n=" + std::to_string(n));
  }
  const auto subsets = k_subsets(n, k);
  const int m = static_cast<int>(subsets.size());
  std::vector<std::int64_t> entries(static_cast<std::size_t>(m) * m);
  std::vector<std::int64_t> minor(static_cast<std::size_t>(k) * k);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      const auto& rows = subsets[static_cast<std::size_t>(r)];
      const auto& cols = subsets[static_cast<std::size_t>(c)];
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor[static_cast<std::size_t>(i * k + j)] = a(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      entries[static_cast<std::size_t>(r * m + c)] = integer_determinant(k, minor);
    }
  }
  return HomologyAction{a, k, IntegerMatrix(m, std::move(entries))};
}

}  // namespace phlab
