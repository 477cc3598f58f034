#pragma once

#include "phlab/core/circle_map.hpp"
#include "phlab/core/suspension.hpp"

#include <utility>

namespace phlab {

/// f_eps(q, y) = (g_{1 + sin 2 pi y}(q), alpha_eps(y)) on the product of the
/// mapping torus with the circle.
class SkewProductMap {
 public:
  SkewProductMap(SuspensionFlow flow, CircleMap circle);

  const SuspensionFlow& flow() const { return flow_; }
  const CircleMap& circle() const { return circle_; }

  /// Flow time applied over the fiber at y.
  static double fiber_speed(double y);

  std::pair<MappingTorusPoint, double> apply(const MappingTorusPoint& q, double y) const;

 private:
  SuspensionFlow flow_;
  CircleMap circle_;
};

}  // namespace phlab
