#pragma once

#include "phlab/core/suspension.hpp"
#include "phlab/core/toral_diffeo.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace phlab {

inline constexpr int kMaxStateDim = 4;
using State = std::array<double, kMaxStateDim>;

/// A discrete-time system on a compact space with coordinates in [0,1)^d,
/// as seen by the sampled entropy estimators.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual int state_dim() const = 0;
  virtual void step(const double* in, double* out) const = 0;
  virtual double distance(const double* a, const double* b) const = 0;
  /// Whether coordinate i wraps with period 1 (metric-wise).
  virtual bool periodic(int i) const = 0;
  /// Other coordinate representations of the same point that lie within eps
  /// of the fundamental domain, for neighbour searches across identifications.
  /// Two points within eps must be within eps coordinate-wise in some pair
  /// of their representations.
  virtual void alternates(const double* p, double eps, std::vector<State>& out) const;
  virtual std::string describe() const = 0;
};

/// A toral diffeomorphism acting on [0,1)^n with the quotient metric.
class ToralDynamics final : public Dynamics {
 public:
  explicit ToralDynamics(ToralDiffeo map) : map_(std::move(map)) {}
  int state_dim() const override { return map_.dim(); }
  void step(const double* in, double* out) const override;
  double distance(const double* a, const double* b) const override;
  bool periodic(int) const override { return true; }
  std::string describe() const override;
  const ToralDiffeo& map() const { return map_; }

 private:
  ToralDiffeo map_;
};

/// Time-t map of a suspension flow on the mapping torus, coordinates (x1, x2, h).
class SuspensionTimeMap final : public Dynamics {
 public:
  SuspensionTimeMap(SuspensionFlow flow, double t) : flow_(std::move(flow)), t_(t) {}
  int state_dim() const override { return 3; }
  void step(const double* in, double* out) const override { flow_.flow_raw(in, t_, out); }
  double distance(const double* a, const double* b) const override { return flow_.distance_raw(a, b); }
  bool periodic(int i) const override { return i < 2; }
  void alternates(const double* p, double eps, std::vector<State>& out) const override;
  std::string describe() const override;
  double time() const { return t_; }

 private:
  SuspensionFlow flow_;
  double t_;
};

/// y -> y + theta on the circle.
class CircleRotation final : public Dynamics {
 public:
  explicit CircleRotation(double theta) : theta_(theta) {}
  int state_dim() const override { return 1; }
  void step(const double* in, double* out) const override;
  double distance(const double* a, const double* b) const override;
  bool periodic(int) const override { return true; }
  std::string describe() const override;

 private:
  double theta_;
};

/// Grid with resolution[i] cells along coordinate i, one point per cell, in
/// row-major order (last coordinate fastest), returned flat. Points sit at
/// cell centres, or uniformly at random inside their cell when jitter is set.
std::vector<double> grid_sample(const std::vector<int>& resolution, bool jitter = false, std::uint64_t seed = 0);

/// Reorders a flat sample of dim-dimensional points by a seeded permutation.
void shuffle_points(std::vector<double>& sample, std::size_t dim, std::uint64_t seed);

}  // namespace phlab
