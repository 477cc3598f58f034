#include "phlab/core/skew_product.hpp"

#include "phlab/core/types.hpp"

#include <cmath>

namespace phlab {

SkewProductMap::SkewProductMap(SuspensionFlow flow, CircleMap circle)
    : flow_(std::move(flow)), circle_(circle) {}

double SkewProductMap::fiber_speed(double y) { return 1.0 + std::sin(kTwoPi * y); }

std::pair<MappingTorusPoint, double> SkewProductMap::apply(const MappingTorusPoint& q, double y) const {
  return {flow_.flow(q, fiber_speed(y)), circle_.apply(y)};
}

}  // namespace phlab
