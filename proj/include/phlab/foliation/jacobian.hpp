#pragma once

#include "phlab/core/quasi_random.hpp"
#include "phlab/core/toral_diffeo.hpp"
#include "phlab/foliation/unstable_frame.hpp"

#include <cstdint>

namespace phlab {

struct JacobianGap {
  double min_ratio = 0.0;  // min over samples of J_k / J_{k-1}
  Vec argmin;
  int samples = 0;
  bool holds() const { return min_ratio > 1.0; }
};

/// J_k(x): k-volume expansion of Df on the numerical unstable k-frame.
/// J_{k-1}(x): product of the k-1 largest singular values of Df (J_0 = 1).
JacobianGap jacobian_gap(const ToralDiffeo& map, int k, int samples, std::uint64_t seed,
                         const FrameOptions& frame = {});

}  // namespace phlab
