#include "phlab/lab/scenario.hpp"

#include "internal.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace phlab {
namespace {

IntegerMatrix parse_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || v.size() > static_cast<std::size_t>(kMaxDim))
    Fields::fail(where, "must be a square array of 1..4 rows");
  const int n = static_cast<int>(v.size());
  std::vector<std::int64_t> e;
  for (const auto& row : v) {
    if (!row.is_array() || static_cast<int>(row.size()) != n) Fields::fail(where, "must be square");
    for (const auto& x : row) {
      if (!x.is_number_integer()) Fields::fail(where, "entries must be integers");
      e.push_back(x.get<std::int64_t>());
    }
  }
  const auto det = integer_determinant(n, e);
  if (det != 1 && det != -1) Fields::fail(where, "determinant must be +1 or -1");
  return IntegerMatrix(n, std::move(e));
}

json matrix_json(const IntegerMatrix& m) { return json(m.rows()); }

MapSpec parse_map(const json& v) {
  Fields f(v, "map");
  MapSpec m;
  const std::string kind = f.text("kind", "toral");
  if (kind == "toral") m.kind = MapKind::Toral;
  else if (kind == "skew-suspension") m.kind = MapKind::SkewSuspension;
  else Fields::fail("map.kind", "must be \"toral\" or \"skew-suspension\"");
  m.matrix = parse_matrix(f.get("matrix"), "map.matrix");
  const int n = m.dim();
  if (m.kind == MapKind::SkewSuspension && n != 2) Fields::fail("map.matrix", "suspension base must be 2x2");
  m.amplitude = f.real("amplitude", 0.0, 1.0, 0.0);
  if (f.has("perturbation")) {
    const json& terms = f.get("perturbation");
    if (!terms.is_array() || terms.size() > 16) Fields::fail("map.perturbation", "must be an array of at most 16 terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Fields t(terms[i], "map.perturbation[" + std::to_string(i) + "]");
      PerturbationTermSpec s;
      s.coefficient = t.reals("coefficient", -10.0, 10.0, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      s.frequency = t.ints("frequency", -16, 16, static_cast<std::size_t>(n), static_cast<std::size_t>(n));
      const std::string ph = t.text("phase", "sin");
      if (ph != "sin" && ph != "cos") Fields::fail(t.where("phase"), "must be \"sin\" or \"cos\"");
      s.phase = ph == "sin" ? Phase::Sin : Phase::Cos;
      t.done();
      m.terms.push_back(std::move(s));
    }
  }
  if (m.kind == MapKind::SkewSuspension && !m.terms.empty()) Fields::fail("map.perturbation", "not supported for skew-suspension maps");
  m.unstable_dim = static_cast<int>(f.integer("unstable_dim", 1, n, 1));
  m.center_dim = static_cast<int>(f.integer("center_dim", 0, n, 0));
  if (m.kind == MapKind::SkewSuspension) {
    m.c = f.real("c", 1e-6, 0.15, 0.05);
    m.epsilon = f.real("epsilon", -0.1, 0.1, 0.0);
  }
  f.done();
  try {
    if (m.kind == MapKind::Toral) (void)m.toral();
    else (void)m.skew();
  } catch (const std::invalid_argument& e) {
    Fields::fail("map", e.what());
  }
  return m;
}

GrowthParams parse_growth(const json& v) {
  Fields f(v, "experiments.volume_growth");
  GrowthParams p;
  p.base_points = static_cast<int>(f.integer("base_points", 1, 1000, p.base_points));
  if (f.has("radii")) p.radii = f.reals("radii", 1e-4, 0.5, 1, 16);
  p.n_max = static_cast<int>(f.integer("n_max", 6, 40, p.n_max));
  p.max_edge = f.real("max_edge", 1e-4, 0.5, p.max_edge);
  p.vertex_budget = static_cast<std::size_t>(f.integer("vertex_budget", 100, 100'000'000, static_cast<long long>(p.vertex_budget)));
  p.stable = f.boolean("stable", p.stable);
  f.done();
  return p;
}

CurrentParams parse_current(const json& v) {
  Fields f(v, "experiments.current");
  CurrentParams p;
  p.radius = f.real("radius", 1e-4, 0.5, p.radius);
  p.n_max = static_cast<int>(f.integer("n_max", 2, 40, p.n_max));
  p.defect_n = static_cast<int>(f.integer("defect_n", 0, 40, p.defect_n));
  if (p.defect_n > p.n_max) Fields::fail("experiments.current.defect_n", "must not exceed n_max");
  f.done();
  return p;
}

JacobianParams parse_jacobian(const json& v) {
  Fields f(v, "experiments.jacobian");
  JacobianParams p;
  p.samples = static_cast<int>(f.integer("samples", 1, 10'000'000, p.samples));
  f.done();
  return p;
}

MeasureEntropyParams parse_measure(const json& v, int dim) {
  Fields f(v, "experiments.measure_entropy");
  MeasureEntropyParams p;
  p.partition = f.ints("partition", 1, 64, static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  p.orbit_length = static_cast<std::size_t>(f.integer("orbit_length", 1000, 1'000'000'000, static_cast<long long>(p.orbit_length)));
  p.burn_in = static_cast<std::size_t>(f.integer("burn_in", 0, 1'000'000, static_cast<long long>(p.burn_in)));
  p.m_max = static_cast<int>(f.integer("m_max", 1, 16, p.m_max));
  p.plateau_tolerance = f.real("plateau_tolerance", 0.0, 1.0, p.plateau_tolerance);
  p.min_word_count = static_cast<std::size_t>(f.integer("min_word_count", 1, 1'000'000, static_cast<long long>(p.min_word_count)));
  p.rare_mass_limit = f.real("rare_mass_limit", 0.0, 0.5, p.rare_mass_limit);
  f.done();
  return p;
}

LyapunovParams parse_lyapunov(const json& v) {
  Fields f(v, "experiments.lyapunov");
  LyapunovParams p;
  p.orbits = static_cast<int>(f.integer("orbits", 1, 1024, p.orbits));
  p.iterates = static_cast<long>(f.integer("iterates", 1000, 100'000'000, p.iterates));
  p.reorth_every = static_cast<int>(f.integer("reorth_every", 1, 1000, p.reorth_every));
  p.warmup = static_cast<int>(f.integer("warmup", 0, 100'000, p.warmup));
  p.band_margin = f.real("band_margin", 0.0, 1.0, p.band_margin);
  f.done();
  return p;
}

Tolerances parse_tolerances(const json& v) {
  Fields f(v, "tolerances");
  Tolerances t;
  t.growth_identity = f.real("growth_identity", 0.0, 10.0, t.growth_identity);
  t.growth_spread = f.real("growth_spread", 0.0, 10.0, t.growth_spread);
  t.h_vs_chi_u = f.real("h_vs_chi_u", 0.0, 10.0, t.h_vs_chi_u);
  t.refined_margin = f.real("refined_margin", 0.0, 10.0, t.refined_margin);
  t.max_identity = f.real("max_identity", 0.0, 10.0, t.max_identity);
  t.pesin_ruelle = f.real("pesin_ruelle", 0.0, 10.0, t.pesin_ruelle);
  t.exponent_sum = f.real("exponent_sum", 0.0, 10.0, t.exponent_sum);
  t.antisymmetry = f.real("antisymmetry", 0.0, 10.0, t.antisymmetry);
  t.closedness = f.real("closedness", 0.0, 10.0, t.closedness);
  t.decay_rate = f.real("decay_rate", 0.0, 1.0, t.decay_rate);
  t.current_class = f.real("current_class", 0.0, 10.0, t.current_class);
  t.eigen_residual = f.real("eigen_residual", 0.0, 10.0, t.eigen_residual);
  f.done();
  return t;
}

int state_dim(const MapSpec& m) { return m.kind == MapKind::SkewSuspension ? 3 : m.dim(); }

}  // namespace

EntropyParams parse_entropy_params(const json& v, int state_dim, const std::string& path) {
  Fields f(v, path);
  EntropyParams p;
  if (f.has("eps_ladder")) p.eps_ladder = f.reals("eps_ladder", 1e-6, 0.5, 1, 16);
  for (std::size_t i = 1; i < p.eps_ladder.size(); ++i)
    if (!(p.eps_ladder[i] < p.eps_ladder[i - 1])) Fields::fail(path + ".eps_ladder", "must be strictly decreasing");
  p.n_max = static_cast<int>(f.integer("n_max", 2, 64, p.n_max));
  if (f.has("grid")) p.grid = f.ints("grid", 2, 4096, 1, kMaxDim);
  if (static_cast<int>(p.grid.size()) != state_dim)
    Fields::fail(path + ".grid", "needs one resolution per state coordinate (" + std::to_string(state_dim) + ")");
  double points = 1.0;
  for (int g : p.grid) points *= g;
  if (points > 16'777'216.0) Fields::fail(path + ".grid", "more than 2^24 sample points");
  p.saturation_fraction = f.real("saturation_fraction", 1e-6, 1.0, p.saturation_fraction);
  p.n_min = static_cast<int>(f.integer("n_min", 0, 63, p.n_min));
  if (p.n_min >= p.n_max) Fields::fail(path + ".n_min", "must be below n_max");
  f.done();
  return p;
}

ToralDiffeo MapSpec::toral() const {
  if (kind != MapKind::Toral) throw std::invalid_argument("map is not a toral diffeomorphism");
  std::vector<TrigPerturbation::Term> out;
  for (const auto& t : terms) {
    Vec c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = t.coefficient[static_cast<std::size_t>(i)];
    out.push_back({c, TrigMode{t.frequency, t.phase}});
  }
  return ToralDiffeo(matrix, TrigPerturbation(dim(), std::move(out), amplitude));
}

SkewProductMap MapSpec::skew() const {
  if (kind != MapKind::SkewSuspension) throw std::invalid_argument("map is not a skew suspension");
  return SkewProductMap(SuspensionFlow(matrix), CircleMap(c, epsilon));
}

Scenario scenario_from_json(const json& doc) {
  Fields f(doc, "scenario");
  Scenario s;
  s.schema_version = static_cast<int>(f.integer("schema_version", 1, 1000));
  if (s.schema_version != kSchemaVersion)
    Fields::fail("scenario.schema_version", "unsupported version " + std::to_string(s.schema_version));
  s.name = f.text("name", "");
  if (s.name.empty()) Fields::fail("scenario.name", "missing required field");
  s.description = f.text("description", "");
  s.seed = f.seed("seed");
  s.map = parse_map(f.get("map"));
  const int n = s.map.dim();
  if (f.has("experiments")) {
    Fields e(f.get("experiments"), "experiments");
    s.homology = e.has("homology");
    if (s.homology) Fields(e.get("homology"), "experiments.homology").done();
    if (e.has("volume_growth")) s.volume_growth = parse_growth(e.get("volume_growth"));
    if (e.has("current")) s.current = parse_current(e.get("current"));
    if (e.has("jacobian")) s.jacobian = parse_jacobian(e.get("jacobian"));
    if (e.has("entropy")) s.entropy = parse_entropy_params(e.get("entropy"), state_dim(s.map), "experiments.entropy");
    if (e.has("measure_entropy")) s.measure_entropy = parse_measure(e.get("measure_entropy"), n);
    if (e.has("lyapunov")) s.lyapunov = parse_lyapunov(e.get("lyapunov"));
    s.verify = e.boolean("verify", true);
    e.done();
  }
  if (s.map.kind == MapKind::SkewSuspension) {
    if (s.current || s.jacobian || s.measure_entropy || s.lyapunov)
      Fields::fail("experiments", "skew-suspension maps support homology, volume_growth, entropy and verify only");
  }
  if (f.has("tolerances")) s.tolerances = parse_tolerances(f.get("tolerances"));
  f.done();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return scenario_from_json(doc);
}

json to_json(const Scenario& s) {
  json map;
  map["kind"] = s.map.kind == MapKind::Toral ? "toral" : "skew-suspension";
  map["matrix"] = matrix_json(s.map.matrix);
  if (s.map.kind == MapKind::Toral) {
    map["amplitude"] = s.map.amplitude;
    json terms = json::array();
    for (const auto& t : s.map.terms)
      terms.push_back({{"coefficient", t.coefficient}, {"frequency", t.frequency}, {"phase", to_string(t.phase)}});
    map["perturbation"] = terms;
  } else {
    map["c"] = s.map.c;
    map["epsilon"] = s.map.epsilon;
  }
  map["unstable_dim"] = s.map.unstable_dim;
  map["center_dim"] = s.map.center_dim;

  json ex = json::object();
  if (s.homology) ex["homology"] = json::object();
  if (const auto& g = s.volume_growth)
    ex["volume_growth"] = {{"base_points", g->base_points}, {"radii", g->radii},        {"n_max", g->n_max},
                           {"max_edge", g->max_edge},       {"vertex_budget", g->vertex_budget}, {"stable", g->stable}};
  if (const auto& c = s.current) ex["current"] = {{"radius", c->radius}, {"n_max", c->n_max}, {"defect_n", c->defect_n}};
  if (const auto& j = s.jacobian) ex["jacobian"] = {{"samples", j->samples}};
  if (const auto& e = s.entropy)
    ex["entropy"] = {{"eps_ladder", e->eps_ladder}, {"n_max", e->n_max}, {"grid", e->grid},
                     {"saturation_fraction", e->saturation_fraction}, {"n_min", e->n_min}};
  if (const auto& m = s.measure_entropy)
    ex["measure_entropy"] = {{"partition", m->partition}, {"orbit_length", m->orbit_length}, {"burn_in", m->burn_in},
                             {"m_max", m->m_max}, {"plateau_tolerance", m->plateau_tolerance},
                             {"min_word_count", m->min_word_count}, {"rare_mass_limit", m->rare_mass_limit}};
  if (const auto& l = s.lyapunov)
    ex["lyapunov"] = {{"orbits", l->orbits}, {"iterates", l->iterates}, {"reorth_every", l->reorth_every},
                      {"warmup", l->warmup}, {"band_margin", l->band_margin}};
  ex["verify"] = s.verify;

  const Tolerances& t = s.tolerances;
  json tol = {{"growth_identity", t.growth_identity}, {"growth_spread", t.growth_spread}, {"h_vs_chi_u", t.h_vs_chi_u},
              {"refined_margin", t.refined_margin},   {"max_identity", t.max_identity},   {"pesin_ruelle", t.pesin_ruelle},
              {"exponent_sum", t.exponent_sum},       {"antisymmetry", t.antisymmetry},   {"closedness", t.closedness},
              {"decay_rate", t.decay_rate},           {"current_class", t.current_class}, {"eigen_residual", t.eigen_residual}};
  return {{"schema_version", s.schema_version}, {"name", s.name},      {"description", s.description}, {"seed", s.seed},
          {"map", map},                         {"experiments", ex}, {"tolerances", tol}};
}

}  // namespace phlab
