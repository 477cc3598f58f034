#pragma once

#include "phlab/core/types.hpp"

#include <span>

namespace phlab {

/// Reduces a real number to [0, 1).
double wrap_unit(double v);

/// Shortest signed displacement from a to b on the circle R/Z, in [-1/2, 1/2].
double circle_gap(double a, double b);

/// A point of the flat torus R^n / Z^n. Coordinates always lie in [0, 1).
class TorusPoint {
 public:
  /// Reduces `lift` modulo Z^n.
  explicit TorusPoint(const Vec& lift);
  TorusPoint(std::initializer_list<double> coords);

  static TorusPoint origin(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vec& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }

 private:
  Vec coords_;
};

/// Quotient (flat) Euclidean distance: per-coordinate wrap-around, then the
/// Euclidean norm. Equal to the minimum over integer translates of the raw
/// distance.
double torus_distance(const TorusPoint& a, const TorusPoint& b);
double torus_distance(std::span<const double> a, std::span<const double> b);

}  // namespace phlab
