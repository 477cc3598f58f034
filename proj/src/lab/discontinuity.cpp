#include "phlab/lab/discontinuity.hpp"

#include "phlab/core/circle_map.hpp"
#include "phlab/core/skew_product.hpp"
#include "phlab/core/suspension.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phlab {

FiberEntropyCache::FiberEntropyCache(IntegerMatrix base, EntropyParams params, std::uint64_t seed, double speed_match)
    : base_(std::move(base)), params_(std::move(params)), speed_match_(speed_match) {
  if (params_.grid.size() != 3) throw std::invalid_argument("fiber entropy needs a 3-coordinate grid");
  sample_ = grid_sample(params_.grid, true, derive_seed(seed, 1));
  shuffle_points(sample_, 3, derive_seed(seed, 2));
}

const EntropyEstimate& FiberEntropyCache::estimate(double speed) {
  for (std::size_t i = 0; i < speeds_.size(); ++i)
    if (std::abs(speeds_[i] - speed) <= speed_match_) return estimates_[i];
  const SuspensionTimeMap map(SuspensionFlow(base_), speed);
  EntropyOptions opts;
  opts.n_min = params_.n_min;
  opts.saturation_fraction = params_.saturation_fraction;
  estimates_.push_back(
      estimate_topological_entropy(map, params_.eps_ladder, params_.n_max, sample_, sampling_label(params_.grid), opts));
  speeds_.push_back(speed);
  return estimates_.back();
}

std::vector<FiberEntropy> fiber_entropies(double c, double eps, double root_tol, FiberEntropyCache& cache) {
  std::vector<FiberEntropy> out;
  for (const auto& fp : circle_fixed_points(CircleMap(c, eps), root_tol)) {
    FiberEntropy f;
    f.eps = eps;
    f.y = fp.y;
    f.multiplier = fp.multiplier;
    f.speed = SkewProductMap::fiber_speed(fp.y);
    f.h = cache.estimate(f.speed).h_hat;
    out.push_back(f);
  }
  return out;
}

std::string bifurcation_side(double c, double eps) {
  if (eps == 0.0) return "critical";
  const int sign = CircleMap(c, 0.0).annihilation_sign();
  return (eps > 0.0) == (sign > 0) ? "annihilation" : "creation";
}

DiscontinuityResult discontinuity_experiment(const DiscontinuityParams& p) {
  bool zero = false, annihilation = false, creation = false;
  for (double e : p.eps_list) {
    const std::string side = bifurcation_side(p.c, e);
    zero |= side == "critical";
    annihilation |= side == "annihilation";
    creation |= side == "creation";
  }
  if (!zero || !annihilation || !creation)
    throw std::invalid_argument("eps list must contain 0 and values on both sides of the saddle-node");

  FiberEntropyCache cache(IntegerMatrix{{2, 1}, {1, 1}}, p.entropy, p.seed, p.speed_match);
  DiscontinuityResult r;
  r.h_g1 = cache.estimate(1.0).h_hat;
  r.h_g2 = cache.estimate(2.0).h_hat;
  double h_zero = 0.0;
  std::vector<FiberEntropy> zero_fibers;
  for (double e : p.eps_list) {
    auto fibers = fiber_entropies(p.c, e, p.root_tol, cache);
    DiscontinuityRow row;
    row.eps = e;
    row.side = bifurcation_side(p.c, e);
    row.fibers = static_cast<int>(fibers.size());
    for (const auto& f : fibers) {
      row.max_speed = std::max(row.max_speed, f.speed);
      row.h = std::max(row.h, f.h);
    }
    row.ratio = row.h / r.h_g1;
    if (row.side == "critical") {
      h_zero = row.h;
      zero_fibers = fibers;
    }
    r.rows.push_back(row);
    r.fibers.insert(r.fibers.end(), fibers.begin(), fibers.end());
  }
  r.distinct_estimates = cache.distinct();

  const double expected_y[] = {0.0, 0.25, 0.5};
  const double expected_speed[] = {1.0, 2.0, 1.0};
  if (zero_fibers.size() == 3) {
    double dev = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      dev = std::max(dev, std::abs(zero_fibers[i].y - expected_y[i]));
      dev = std::max(dev, std::abs(zero_fibers[i].speed - expected_speed[i]));
    }
    r.verdicts.push_back(make_verdict("fiber speeds at eps = 0 are {1, 2, 1} at y = {0, 1/4, 1/2}", "=", dev, 0.0, p.root_tol));
  } else {
    Verdict v = make_verdict("fiber speeds at eps = 0 are {1, 2, 1} at y = {0, 1/4, 1/2}", "=",
                             static_cast<double>(zero_fibers.size()), 3.0, 0.0);
    r.verdicts.push_back(v);
  }
  r.verdicts.push_back(make_verdict("h(g_2) / h(g_1) = 2", "=", r.h_g2 / r.h_g1, 2.0, p.ratio_tolerance));
  r.verdicts.push_back(make_verdict("h(f_0) / h(g_1) = 2", "=", h_zero / r.h_g1, 2.0, p.ratio_tolerance));
  const double mid = 0.5 * (p.jump_low + p.jump_high), half = 0.5 * (p.jump_high - p.jump_low);
  for (const auto& row : r.rows) {
    const std::string eps = short_number(row.eps);
    if (row.side == "annihilation") {
      r.verdicts.push_back(make_verdict("h(f_eps) / h(g_1) = 1 at eps = " + eps, "=", row.ratio, 1.0, p.ratio_tolerance));
      r.verdicts.push_back(make_verdict("h(f_0) / h(f_eps) in [" + short_number(p.jump_low) + ", " + short_number(p.jump_high) + "] at eps = " + eps,
                                        "=", h_zero / row.h, mid, half));
    } else if (row.side == "creation") {
      r.verdicts.push_back(make_verdict("h(f_eps) / h(g_1) = 2 at eps = " + eps, "=", row.ratio, 2.0, p.ratio_tolerance));
    }
  }
  return r;
}

DiscontinuityParams discontinuity_params_from_json(const nlohmann::json& doc) {
  Fields f(doc, "discontinuity");
  DiscontinuityParams p;
  if (f.integer("schema_version", 1, 1000) != kSchemaVersion) Fields::fail("discontinuity.schema_version", "unsupported version");
  p.seed = f.seed("seed");
  p.c = f.real("c", 1e-6, 0.15, p.c);
  if (f.has("eps_list")) p.eps_list = f.reals("eps_list", -0.1, 0.1, 3, 16);
  if (f.has("entropy")) p.entropy = parse_entropy_params(f.get("entropy"), 3, "discontinuity.entropy");
  p.root_tol = f.real("root_tol", 1e-14, 1e-3, p.root_tol);
  p.speed_match = f.real("speed_match", 0.0, 1e-3, p.speed_match);
  p.ratio_tolerance = f.real("ratio_tolerance", 0.0, 2.0, p.ratio_tolerance);
  if (f.has("jump_range")) {
    const auto r = f.reals("jump_range", 0.0, 10.0, 2, 2);
    if (!(r[0] < r[1])) Fields::fail("discontinuity.jump_range", "must be increasing");
    p.jump_low = r[0];
    p.jump_high = r[1];
  }
  f.done();
  try {
    (void)CircleMap(p.c, 0.0);
  } catch (const std::invalid_argument& e) {
    Fields::fail("discontinuity.c", e.what());
  }
  return p;
}

nlohmann::json to_json(const DiscontinuityParams& p) {
  return {{"schema_version", kSchemaVersion},
          {"c", p.c},
          {"eps_list", p.eps_list},
          {"entropy",
           {{"eps_ladder", p.entropy.eps_ladder},
            {"n_max", p.entropy.n_max},
            {"grid", p.entropy.grid},
            {"saturation_fraction", p.entropy.saturation_fraction},
            {"n_min", p.entropy.n_min}}},
          {"seed", p.seed},
          {"root_tol", p.root_tol},
          {"speed_match", p.speed_match},
          {"ratio_tolerance", p.ratio_tolerance},
          {"jump_range", {p.jump_low, p.jump_high}}};
}

nlohmann::json to_json(const DiscontinuityResult& r) {
  nlohmann::json fibers = nlohmann::json::array(), rows = nlohmann::json::array(), verdicts = nlohmann::json::array();
  for (const auto& f : r.fibers)
    fibers.push_back({{"eps", f.eps}, {"y", f.y}, {"multiplier", f.multiplier}, {"speed", f.speed}, {"h", f.h}});
  for (const auto& row : r.rows)
    rows.push_back({{"eps", row.eps}, {"side", row.side}, {"fibers", row.fibers}, {"max_speed", row.max_speed}, {"h", row.h}, {"ratio", row.ratio}});
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  return {{"h_g1", r.h_g1}, {"h_g2", r.h_g2}, {"distinct_estimates", r.distinct_estimates},
          {"fibers", fibers}, {"jump_table", rows}, {"verdicts", verdicts}};
}

}  // namespace phlab
