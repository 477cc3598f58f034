#include "phlab/foliation/volume_growth.hpp"

#include "phlab/core/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace phlab {

void iterate_patch(const ToralDiffeo& map, PolyPatch disk, int n_max, const GrowthOptions& opts,
                   const PatchObserver& observe) {
  for (int n = 0;; ++n) {
    observe(n, disk);
    if (n == n_max) break;
    disk = iterate_refine(map, disk, opts.max_edge, opts.vertex_budget);
  }
}

GrowthEstimate estimate_volume_growth(const ToralDiffeo& map, const TorusPoint& x, double r, int k, int n_max,
                                      const GrowthOptions& opts, const PatchObserver& observe) {
  if (n_max < 6) throw std::invalid_argument("volume growth needs n_max >= 6");
  GrowthEstimate g;
  iterate_patch(map, seed_unstable_disk(map, x, r, k, opts.max_edge, opts.frame), n_max, opts,
                [&](int n, const PolyPatch& p) {
                  g.iterates.push_back(n);
                  g.log_volumes.push_back(std::log(patch_volume(p)));
                  if (observe) observe(n, p);
                });
  g.n_lo = (n_max + 1) / 2;
  g.n_hi = n_max;
  std::vector<double> xs, ys;
  for (int n = g.n_lo; n <= g.n_hi; ++n) {
    xs.push_back(n);
    ys.push_back(g.log_volumes[static_cast<std::size_t>(n)]);
  }
  const LineFit f = fit_line(xs, ys);
  g.slope = f.slope;
  g.intercept = f.intercept;
  g.r_squared = f.r_squared;
  return g;
}

}  // namespace phlab
