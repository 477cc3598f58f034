#include "phlab/core/circle_map.hpp"

#include "phlab/core/torus.hpp"
#include "phlab/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace phlab {
namespace {

constexpr int kGrid = 8192;

double shape(double y) {
  const double s = std::sin(kTwoPi * y);
  return s - s * s;
}

double shape_slope(double y) {
  const double th = kTwoPi * y;
  return kTwoPi * std::cos(th) * (1.0 - 2.0 * std::sin(th));
}

double shape_curvature(double y) {
  const double th = kTwoPi * y;
  const double s = std::sin(th), c = std::cos(th);
  return kTwoPi * kTwoPi * (-s + 2.0 * s * s - 2.0 * c * c);
}

// Root of f on [a, b] with f(a), f(b) of opposite sign (or one of them zero).
double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  if (fa == 0.0) return a;
  if (f(b) == 0.0) return b;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

CircleMap::CircleMap(double c, double epsilon) : c_(c), epsilon_(epsilon) {
  if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("circle map needs finite c > 0 and finite epsilon");
  }
  if (!(c * shape_slope_bound() < 1.0)) {
    throw std::invalid_argument("circle map amplitude too large: c * max|g'| >= 1, not a diffeomorphism");
  }
}

double CircleMap::apply(double y) const { return wrap_unit(y + displacement(y)); }

double CircleMap::displacement(double y) const { return c_ * shape(y) + epsilon_; }

double CircleMap::derivative(double y) const { return 1.0 + c_ * shape_slope(y); }

double CircleMap::second_derivative(double y) const { return c_ * shape_curvature(y); }

int CircleMap::annihilation_sign() const {
  // Near y2 the displacement is eps + alpha''(y2)/2 dy^2; no roots when the
  // two terms share a sign.
  return second_derivative(kParabolicPoint) > 0.0 ? +1 : -1;
}

double CircleMap::shape_slope_bound() {
  // g'(y) = 2 pi cos t (1 - 2 sin t); critical points solve 4 s^2 - s - 2 = 0.
  double best = 0.0;
  for (double s : {(1.0 + std::sqrt(33.0)) / 8.0, (1.0 - std::sqrt(33.0)) / 8.0}) {
    best = std::max(best, std::sqrt(1.0 - s * s) * std::abs(1.0 - 2.0 * s));
  }
  return kTwoPi * best;
}

std::vector<CircleFixedPoint> circle_fixed_points(const CircleMap& map, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("root tolerance must be positive");
  const auto f = [&](double y) { return map.displacement(y); };
  const auto df = [&](double y) { return map.derivative(y) - 1.0; };
  const double h = 1.0 / kGrid;

  std::vector<double> roots;
  for (int i = 0; i < kGrid; ++i) {
    const double a = i * h, b = (i + 1) * h;
    const double fa = f(a), fb = f(b);
    if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
      if (fa != 0.0 && fb == 0.0) continue;  // picked up as the next cell's left end
      roots.push_back(bisect(f, a, b));
      continue;
    }
    // Tangential candidates: an interior critical point of the displacement
    // where it comes within tol of zero.
    const double da = df(a), db = df(b);
    if ((da < 0.0) != (db < 0.0)) {
      const double y = bisect(df, a, b);
      if (std::abs(f(y)) <= tol) roots.push_back(y);
    }
  }

  for (double& r : roots) r = wrap_unit(r);
  std::sort(roots.begin(), roots.end());
  std::vector<CircleFixedPoint> out;
  for (double r : roots) {
    if (!out.empty() && std::abs(circle_gap(out.back().y, r)) < 2.0 * h) continue;
    out.push_back({r, map.derivative(r)});
  }
  // A root at 0 may also have been found just below 1.
  if (out.size() > 1 && std::abs(circle_gap(out.front().y, out.back().y)) < 2.0 * h) out.pop_back();
  return out;
}

}  // namespace phlab
