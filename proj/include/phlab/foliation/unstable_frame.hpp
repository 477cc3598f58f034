#pragma once

#include "phlab/core/toral_diffeo.hpp"
#include "phlab/foliation/poly_patch.hpp"

#include <cstdint>

namespace phlab {

struct FrameOptions {
  int warmup = 64;             // length of the backward orbit the frame is pushed along
  double tolerance = 1e-6;     // allowed drift between the full and a 3/4-length push
  std::uint64_t seed = 0x5eedULL;
};

struct UnstableFrame {
  Mat basis;     // dim x k, orthonormal columns; column 1 has first significant entry > 0
  double drift;  // sine of the largest principal angle between the two pushes
};

/// Numerical unstable k-frame at x: a random frame is pushed by Df along the
/// orbit x_{-N}, ..., x_{-1}, x (obtained by inverting the map) with a QR
/// step each iterate. The push is repeated from x_{-3N/4}; a drift above the
/// tolerance throws ConvergenceError.
UnstableFrame unstable_frame(const ToralDiffeo& map, const Vec& x, int k, const FrameOptions& opts = {});

/// Flat k-disk of radius r centred at x in the unstable frame: a straight
/// polyline for k = 1, a ring-triangulated disk for k = 2. All edges are at
/// most max_edge.
PolyPatch seed_unstable_disk(const ToralDiffeo& map, const TorusPoint& x, double r, int k,
                             double max_edge = kDefaultMaxEdge, const FrameOptions& opts = {});

}  // namespace phlab
