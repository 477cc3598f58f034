#pragma once

#include <vector>

namespace phlab {

/// alpha_eps(y) = y + c (sin 2 pi y - sin^2 2 pi y) + eps  (mod 1).
///
/// For eps = 0 the fixed points are exactly 0, 1/4, 1/2 with multipliers
/// 1 + 2 pi c, 1, 1 - 2 pi c; the fixed point at 1/4 is parabolic and
/// undergoes a saddle-node bifurcation as eps crosses 0.
class CircleMap {
 public:
  /// Throws std::invalid_argument unless c > 0 and 1 + c * min g' > 0
  /// (orientation-preserving diffeomorphism).
  CircleMap(double c, double epsilon);

  double c() const { return c_; }
  double epsilon() const { return epsilon_; }

  double apply(double y) const;
  /// alpha_eps(y) - y on the lift: c g(y) + eps.
  double displacement(double y) const;
  double derivative(double y) const;
  double second_derivative(double y) const;

  /// Parabolic fixed point of the eps = 0 map.
  static constexpr double kParabolicPoint = 0.25;

  /// +1 if the parabolic pair annihilates for eps > 0, -1 if for eps < 0.
  /// Read off the sign of alpha''(1/4).
  int annihilation_sign() const;

  /// max |g'| for g(y) = sin 2 pi y - sin^2 2 pi y.
  static double shape_slope_bound();

 private:
  double c_;
  double epsilon_;
};

struct CircleFixedPoint {
  double y;
  double multiplier;
};

/// All fixed points of the circle map, sorted by y in [0, 1). Transversal
/// roots are bracketed by sign changes on a fine grid and bisected;
/// tangential roots are located as critical points of the displacement and
/// accepted when |displacement| <= tol. An empty result is valid.
std::vector<CircleFixedPoint> circle_fixed_points(const CircleMap& map, double tol);

}  // namespace phlab
