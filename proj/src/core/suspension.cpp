#include "phlab/core/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace phlab {
namespace {

void apply_integer(const IntegerMatrix& m, double& x, double& y) {
  const double nx = static_cast<double>(m(0, 0)) * x + static_cast<double>(m(0, 1)) * y;
  const double ny = static_cast<double>(m(1, 0)) * x + static_cast<double>(m(1, 1)) * y;
  x = wrap_unit(nx);
  y = wrap_unit(ny);
}

// Unwrapped image; circle_gap reduces mod 1 itself.
void apply_linear(const IntegerMatrix& m, double x, double y, double& ox, double& oy) {
  ox = static_cast<double>(m(0, 0)) * x + static_cast<double>(m(0, 1)) * y;
  oy = static_cast<double>(m(1, 0)) * x + static_cast<double>(m(1, 1)) * y;
}

double base_gap(double x1, double x2, double y1, double y2) {
  const double a = circle_gap(x1, y1);
  const double b = circle_gap(x2, y2);
  return std::sqrt(a * a + b * b);
}

}  // namespace

MappingTorusPoint::MappingTorusPoint(TorusPoint base, double height) : base_(std::move(base)), height_(height) {
  if (base_.dim() != 2) throw std::invalid_argument("mapping torus base must be T^2");
  if (!(height >= 0.0 && height < 1.0)) throw std::invalid_argument("mapping torus height must lie in [0, 1)");
}

SuspensionFlow::SuspensionFlow(IntegerMatrix base_map) : a_(std::move(base_map)), a_inv_(a_.inverse()) {
  if (a_.size() != 2) throw std::invalid_argument("suspension base map must be 2x2");
  // Characteristic polynomial x^2 - t x + d; an eigenvalue on the unit circle
  // forces |t| <= 2 when d = 1, and t = 0 when d = -1.
  const double t = static_cast<double>(a_(0, 0) + a_(1, 1));
  const double d = static_cast<double>(a_.det());
  const double disc = t * t - 4.0 * d;
  bool hyperbolic = disc > 0.0;
  if (hyperbolic) {
    const double r1 = std::abs((t + std::sqrt(disc)) / 2.0);
    const double r2 = std::abs((t - std::sqrt(disc)) / 2.0);
    hyperbolic = std::abs(r1 - 1.0) > 1e-12 && std::abs(r2 - 1.0) > 1e-12;
  }
  if (!hyperbolic) throw std::invalid_argument("suspension base map is not hyperbolic: " + a_.to_string());
}

void SuspensionFlow::flow_raw(const double* in, double t, double* out) const {
  double x = in[0], y = in[1];
  double h = in[2] + t;
  double k = std::floor(h);
  h -= k;
  if (h >= 1.0) {
    h = 0.0;
    k += 1.0;
  }
  const long long crossings = static_cast<long long>(k);
  for (long long i = 0; i < crossings; ++i) apply_integer(a_, x, y);
  for (long long i = 0; i > crossings; --i) apply_integer(a_inv_, x, y);
  out[0] = x;
  out[1] = y;
  out[2] = h;
}

MappingTorusPoint SuspensionFlow::flow(const MappingTorusPoint& q, double t) const {
  const double in[3] = {q.base()[0], q.base()[1], q.height()};
  double out[3];
  flow_raw(in, t, out);
  return MappingTorusPoint(TorusPoint{out[0], out[1]}, out[2]);
}

double SuspensionFlow::distance_raw(const double* p, const double* q) const {
  // Direct gap, then (x, h) ~ (A x, h - 1) in both directions. A crossed
  // comparison is skipped when its height gap alone cannot improve on the best.
  const double direct_h = std::abs(p[2] - q[2]);
  double best = std::max(base_gap(p[0], p[1], q[0], q[1]), direct_h);
  const double lowered_h = std::abs(p[2] - 1.0 - q[2]);
  if (lowered_h < best) {
    double ax, ay;
    apply_linear(a_, p[0], p[1], ax, ay);
    best = std::min(best, std::max(base_gap(ax, ay, q[0], q[1]), lowered_h));
  }
  const double raised_h = std::abs(q[2] - 1.0 - p[2]);
  if (raised_h < best) {
    double bx, by;
    apply_linear(a_, q[0], q[1], bx, by);
    best = std::min(best, std::max(base_gap(p[0], p[1], bx, by), raised_h));
  }
  return best;
}

double SuspensionFlow::distance(const MappingTorusPoint& p, const MappingTorusPoint& q) const {
  const double a[3] = {p.base()[0], p.base()[1], p.height()};
  const double b[3] = {q.base()[0], q.base()[1], q.height()};
  return distance_raw(a, b);
}

}  // namespace phlab
