#include "phlab/entropy/dynamics.hpp"

#include "phlab/core/torus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace phlab {

void Dynamics::alternates(const double*, double, std::vector<State>& out) const { out.clear(); }

void ToralDynamics::step(const double* in, double* out) const {
  const int n = map_.dim();
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = in[i];
  const Vec y = map_.apply_lift(x);
  for (int i = 0; i < n; ++i) out[i] = wrap_unit(y[i]);
}

double ToralDynamics::distance(const double* a, const double* b) const {
  const auto n = static_cast<std::size_t>(map_.dim());
  return torus_distance(std::span<const double>(a, n), std::span<const double>(b, n));
}

std::string ToralDynamics::describe() const {
  std::ostringstream os;
  os << "toral map " << map_.linear_part().to_string() << (map_.is_linear() ? "" : " + perturbation")
     << (map_.is_reversed() ? " (inverse)" : "");
  return os.str();
}

void SuspensionTimeMap::alternates(const double* p, double eps, std::vector<State>& out) const {
  // Only the lowered copy: the metric compares across the roof in the
  // coordinates below it.
  out.clear();
  const IntegerMatrix& a = flow_.base_map();
  if (p[2] > 1.0 - eps) {
    // (x, h) ~ (A x, h - 1)
    const double x = a(0, 0) * p[0] + a(0, 1) * p[1], y = a(1, 0) * p[0] + a(1, 1) * p[1];
    out.push_back({wrap_unit(x), wrap_unit(y), p[2] - 1.0, 0.0});
  }
}

std::string SuspensionTimeMap::describe() const {
  std::ostringstream os;
  os << "time-" << t_ << " map of the suspension of " << flow_.base_map().to_string();
  return os.str();
}

void CircleRotation::step(const double* in, double* out) const { out[0] = wrap_unit(in[0] + theta_); }

double CircleRotation::distance(const double* a, const double* b) const { return std::abs(circle_gap(a[0], b[0])); }

std::string CircleRotation::describe() const {
  std::ostringstream os;
  os << "circle rotation by " << theta_;
  return os.str();
}

std::vector<double> grid_sample(const std::vector<int>& resolution, bool jitter, std::uint64_t seed) {
  if (resolution.empty() || resolution.size() > static_cast<std::size_t>(kMaxStateDim))
    throw std::invalid_argument("grid dimension must be 1..4");
  std::size_t total = 1;
  for (int r : resolution) {
    if (r < 1) throw std::invalid_argument("grid resolution must be positive");
    total *= static_cast<std::size_t>(r);
  }
  const std::size_t d = resolution.size();
  std::vector<double> out(total * d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rem = p;
    for (std::size_t i = d; i-- > 0;) {
      const auto r = static_cast<std::size_t>(resolution[i]);
      const double offset = jitter ? u(rng) : 0.5;
      out[p * d + i] = (static_cast<double>(rem % r) + offset) / static_cast<double>(r);
      rem /= r;
    }
  }
  return out;
}

void shuffle_points(std::vector<double>& sample, std::size_t dim, std::uint64_t seed) {
  if (dim == 0 || sample.size() % dim != 0) throw std::invalid_argument("sample size is not a multiple of dim");
  const std::size_t n = sample.size() / dim;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap_ranges(sample.begin() + static_cast<std::ptrdiff_t>((i - 1) * dim),
                     sample.begin() + static_cast<std::ptrdiff_t>(i * dim),
                     sample.begin() + static_cast<std::ptrdiff_t>(j * dim));
  }
}

}  // namespace phlab
