#pragma once

#include "phlab/entropy/separated.hpp"
#include "phlab/lab/scenario.hpp"
#include "phlab/lab/verify.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace phlab {

/// Entropy estimates of time-t suspension maps, shared between fibers whose
/// speeds agree within `speed_match`.
class FiberEntropyCache {
 public:
  FiberEntropyCache(IntegerMatrix base, EntropyParams params, std::uint64_t seed, double speed_match = 1e-9);

  /// Estimate for the time-speed map; computed once per distinct speed.
  const EntropyEstimate& estimate(double speed);
  std::size_t distinct() const { return speeds_.size(); }
  const std::vector<double>& speeds() const { return speeds_; }

 private:
  IntegerMatrix base_;
  EntropyParams params_;
  std::vector<double> sample_;
  double speed_match_;
  std::vector<double> speeds_;
  std::vector<EntropyEstimate> estimates_;
};

/// One fixed point of the circle map and the entropy of the fiber over it.
struct FiberEntropy {
  double eps = 0.0;
  double y = 0.0;
  double multiplier = 0.0;
  double speed = 0.0;
  double h = 0.0;
};

/// Fixed points of alpha_eps (root tolerance `root_tol`) with their fiber
/// entropies; h(f_eps) is the maximum over the returned fibers.
std::vector<FiberEntropy> fiber_entropies(double c, double eps, double root_tol, FiberEntropyCache& cache);

/// "critical" for eps = 0, otherwise "annihilation" or "creation".
std::string bifurcation_side(double c, double eps);

struct DiscontinuityParams {
  double c = 0.05;
  std::vector<double> eps_list{0.0, 0.005, -0.005};
  EntropyParams entropy{{0.3, 0.2}, 8, {128, 128, 16}, 0.02, 2};
  std::uint64_t seed = 11;
  double root_tol = 1e-10;
  double speed_match = 1e-9;
  double ratio_tolerance = 0.2;
  double jump_low = 1.7;
  double jump_high = 2.3;
};

struct DiscontinuityRow {
  double eps = 0.0;
  std::string side;
  int fibers = 0;
  double max_speed = 0.0;
  double h = 0.0;
  double ratio = 0.0;  // h / h(g_1)
};

struct DiscontinuityResult {
  std::vector<FiberEntropy> fibers;
  std::vector<DiscontinuityRow> rows;
  double h_g1 = 0.0;  // time-1 suspension map
  double h_g2 = 0.0;  // time-2 suspension map
  std::size_t distinct_estimates = 0;
  std::vector<Verdict> verdicts;
};

/// Throws std::invalid_argument unless eps_list contains 0 and values on
/// both sides of the saddle-node.
DiscontinuityResult discontinuity_experiment(const DiscontinuityParams& p);

/// Strict parse of a discontinuity document (schema_version, seed, c,
/// eps_list, entropy, tolerances); throws ScenarioError.
DiscontinuityParams discontinuity_params_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const DiscontinuityParams& p);
nlohmann::json to_json(const DiscontinuityResult& r);

}  // namespace phlab
