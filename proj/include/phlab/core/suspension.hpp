#pragma once

#include "phlab/core/integer_matrix.hpp"
#include "phlab/core/torus.hpp"

namespace phlab {

/// Point (x, h) of the mapping torus T^2 x [0,1] / (x, 1) ~ (A x, 0).
class MappingTorusPoint {
 public:
  /// Throws std::invalid_argument unless base is 2-dimensional and height in [0, 1).
  MappingTorusPoint(TorusPoint base, double height);

  const TorusPoint& base() const { return base_; }
  double height() const { return height_; }

 private:
  TorusPoint base_;
  double height_;
};

/// Unit-roof suspension flow of a hyperbolic automorphism of T^2: the
/// height advances at unit speed and each upward crossing of the roof
/// applies A to the base (A^{-1} for downward crossings).
class SuspensionFlow {
 public:
  /// Throws std::invalid_argument unless A is 2x2 with no eigenvalue on the unit circle.
  explicit SuspensionFlow(IntegerMatrix base_map);

  const IntegerMatrix& base_map() const { return a_; }

  MappingTorusPoint flow(const MappingTorusPoint& q, double t) const;

  /// Metric on the mapping torus: minimum of the direct gap and the two gaps
  /// through the roof identification, each the max of the T^2 quotient
  /// distance and the height difference.
  double distance(const MappingTorusPoint& p, const MappingTorusPoint& q) const;

  /// Raw-coordinate versions (x1, x2, h) for the sampled kernels.
  void flow_raw(const double* in, double t, double* out) const;
  double distance_raw(const double* p, const double* q) const;

 private:
  IntegerMatrix a_;
  IntegerMatrix a_inv_;
};

}  // namespace phlab
