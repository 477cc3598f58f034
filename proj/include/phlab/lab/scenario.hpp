#pragma once

#include "phlab/core/integer_matrix.hpp"
#include "phlab/core/skew_product.hpp"
#include "phlab/core/toral_diffeo.hpp"
#include "phlab/core/trig.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phlab {

/// Version of the scenario and report documents.
inline constexpr int kSchemaVersion = 1;

/// A scenario document failed validation; the message names the offending field.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PerturbationTermSpec {
  std::vector<double> coefficient;
  std::vector<int> frequency;
  Phase phase = Phase::Sin;
};

enum class MapKind { Toral, SkewSuspension };

struct MapSpec {
  MapKind kind = MapKind::Toral;
  IntegerMatrix matrix{{1}};  // the toral map, or the suspended base map
  double amplitude = 0.0;
  std::vector<PerturbationTermSpec> terms;
  int unstable_dim = 1;
  int center_dim = 0;
  double c = 0.05;      // skew only
  double epsilon = 0.0;  // skew only

  int dim() const { return matrix.size(); }
  bool is_linear() const { return amplitude == 0.0 || terms.empty(); }
  ToralDiffeo toral() const;
  SkewProductMap skew() const;
};

struct GrowthParams {
  int base_points = 5;
  std::vector<double> radii{0.05, 0.1};
  int n_max = 10;
  double max_edge = 0.02;
  std::size_t vertex_budget = 2'000'000;
  bool stable = false;  // also estimate chi_s as the unstable growth of the inverse
};

struct CurrentParams {
  double radius = 0.1;
  int n_max = 10;
  int defect_n = 8;
};

struct JacobianParams {
  int samples = 10000;
};

struct EntropyParams {
  std::vector<double> eps_ladder{0.2, 0.1, 0.05};
  int n_max = 8;
  std::vector<int> grid{512, 512};
  double saturation_fraction = 0.02;
  int n_min = 2;
};

struct MeasureEntropyParams {
  std::vector<int> partition{4, 4};
  std::size_t orbit_length = 10'000'000;
  std::size_t burn_in = 1000;
  int m_max = 8;
  double plateau_tolerance = 0.01;
  std::size_t min_word_count = 10;
  double rare_mass_limit = 0.01;
};

struct LyapunovParams {
  int orbits = 4;
  long iterates = 20000;
  int reorth_every = 1;
  int warmup = 200;
  double band_margin = 0.1;
};

/// Allowed slack of each verdict.
struct Tolerances {
  double growth_identity = 0.01;
  double growth_spread = 0.02;
  double h_vs_chi_u = 0.05;
  double refined_margin = 0.05;
  double max_identity = 0.1;
  double pesin_ruelle = 0.1;
  double exponent_sum = 1e-6;
  double antisymmetry = 1e-5;
  double closedness = 1e-2;
  double decay_rate = 0.5;
  double current_class = 1e-3;
  double eigen_residual = 1e-3;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string description;
  std::uint64_t seed = 0;
  MapSpec map;
  bool homology = false;
  std::optional<GrowthParams> volume_growth;
  std::optional<CurrentParams> current;
  std::optional<JacobianParams> jacobian;
  std::optional<EntropyParams> entropy;
  std::optional<MeasureEntropyParams> measure_entropy;
  std::optional<LyapunovParams> lyapunov;
  bool verify = true;
  Tolerances tolerances;
};

/// Strict parse: unknown keys, missing seed, wrong types and out-of-range
/// values throw ScenarioError.
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);
nlohmann::json to_json(const Scenario& s);

}  // namespace phlab
