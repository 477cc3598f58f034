#pragma once

#include "phlab/foliation/poly_patch.hpp"
#include "phlab/foliation/unstable_frame.hpp"

#include <functional>
#include <vector>

namespace phlab {

struct GrowthOptions {
  double max_edge = kDefaultMaxEdge;
  std::size_t vertex_budget = kDefaultVertexBudget;
  FrameOptions frame;
};

/// ln Vol(f^n W_r(x)) for n = 0..n_max and the least-squares slope over the
/// upper half n_lo = ceil(n_max / 2) .. n_max.
struct GrowthEstimate {
  std::vector<int> iterates;
  std::vector<double> log_volumes;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_lo = 0;
  int n_hi = 0;
  bool reliable() const { return r_squared >= 0.99; }
};

/// Called with (n, f^n W) for every n = 0..n_max.
using PatchObserver = std::function<void(int, const PolyPatch&)>;

/// Iterates `disk` n_max times, calling `observe` at every step.
void iterate_patch(const ToralDiffeo& map, PolyPatch disk, int n_max, const GrowthOptions& opts,
                   const PatchObserver& observe);

/// Throws std::invalid_argument when n_max < 6.
GrowthEstimate estimate_volume_growth(const ToralDiffeo& map, const TorusPoint& x, double r, int k, int n_max,
                                      const GrowthOptions& opts = {}, const PatchObserver& observe = {});

}  // namespace phlab
