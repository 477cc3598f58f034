#include "phlab/foliation/jacobian.hpp"

#include "phlab/core/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace phlab {

JacobianGap jacobian_gap(const ToralDiffeo& map, int k, int samples, std::uint64_t seed, const FrameOptions& frame) {
  const int n = map.dim();
  if (k < 1 || k > n) throw std::invalid_argument("jacobian_gap needs 1 <= k <= dim");
  if (samples < 1) throw std::invalid_argument("jacobian_gap needs at least one sample");
  std::vector<double> ratio(static_cast<std::size_t>(samples));
  std::vector<Vec> pts(static_cast<std::size_t>(samples));
  parallel_for(pts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const Vec x = quasi_random_point(n, i, seed);
      const Mat d = map.differential(x);
      const Mat du = d * unstable_frame(map, x, k, frame).basis;
      const double jk = std::sqrt(std::max(0.0, (du.transpose() * du).determinant()));
      const Vec sv = Eigen::JacobiSVD<Mat>(d).singularValues();
      double jk1 = 1.0;
      for (int j = 0; j < k - 1; ++j) jk1 *= sv[j];
      ratio[i] = jk / jk1;
      pts[i] = x;
    }
  });
  JacobianGap g;
  g.samples = samples;
  std::size_t best = 0;
  for (std::size_t i = 1; i < ratio.size(); ++i)
    if (ratio[i] < ratio[best]) best = i;
  g.min_ratio = ratio[best];
  g.argmin = pts[best];
  return g;
}

}  // namespace phlab
