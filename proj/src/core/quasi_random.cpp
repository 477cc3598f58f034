#include "phlab/core/quasi_random.hpp"

#include <cmath>
#include <random>

namespace phlab {

Vec quasi_random_point(int dim, std::uint64_t index, std::uint64_t seed) {
  // phi_d is the positive root of x^{d+1} = x + 1.
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec p(dim);
  for (int j = 0; j < dim; ++j) {
    const double alpha = std::pow(1.0 / phi, j + 1);
    const double v = u(rng) + alpha * static_cast<double>(index);
    p[j] = v - std::floor(v);
  }
  return p;
}

}  // namespace phlab
