#include "phlab/core/torus.hpp"

#include <cassert>
#include <cmath>

namespace phlab {

double wrap_unit(double v) {
  double r = v - std::floor(v);
  // v slightly below an integer can round up to exactly 1.0.
  if (r >= 1.0) r = 0.0;
  return r;
}

double circle_gap(double a, double b) {
  double d = b - a;
  return d - std::nearbyint(d);
}

TorusPoint::TorusPoint(const Vec& lift) : coords_(lift.size()) {
  for (Eigen::Index i = 0; i < lift.size(); ++i) coords_[i] = wrap_unit(lift[i]);
}

TorusPoint::TorusPoint(std::initializer_list<double> coords)
    : coords_(static_cast<Eigen::Index>(coords.size())) {
  Eigen::Index i = 0;
  for (double c : coords) coords_[i++] = wrap_unit(c);
}

TorusPoint TorusPoint::origin(int dim) { return TorusPoint(Vec::Zero(dim)); }

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  assert(a.dim() == b.dim());
  return torus_distance(std::span<const double>(a.coords().data(), a.dim()),
                        std::span<const double>(b.coords().data(), b.dim()));
}

double torus_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double g = circle_gap(a[i], b[i]);
    s += g * g;
  }
  return std::sqrt(s);
}

}  // namespace phlab
