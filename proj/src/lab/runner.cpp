#include "phlab/lab/runner.hpp"

#include "phlab/core/circle_map.hpp"
#include "phlab/core/quasi_random.hpp"
#include "phlab/entropy/measure_entropy.hpp"
#include "phlab/entropy/separated.hpp"
#include "phlab/foliation/currents.hpp"
#include "phlab/foliation/jacobian.hpp"
#include "phlab/foliation/volume_growth.hpp"
#include "phlab/homology/exterior.hpp"
#include "phlab/homology/spectrum.hpp"
#include "phlab/lab/discontinuity.hpp"
#include "phlab/lyapunov/spectrum.hpp"
#include "internal.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>

namespace phlab {

using nlohmann::json;

std::string csv_number(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

int Report::exit_code() const {
  if (execution_error) return 1;
  return all_pass(verdicts) ? 0 : 2;
}

json Report::document() const {
  json d = body;
  d["timing"] = timing;
  return d;
}

namespace {

// Seed streams of the experiments within one scenario.
enum Stream : std::uint64_t { kGrowth = 10, kCurrent = 20, kJacobian = 30, kEntropy = 40, kMeasure = 50, kLyapunov = 60 };

constexpr double kRootTolerance = 1e-10;

std::string str(int x) { return std::to_string(x); }
std::string str(std::size_t x) { return std::to_string(x); }
std::string str(double x) { return csv_number(x); }

json vec_json(const Vec& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

class Run {
 public:
  explicit Run(const Scenario& s) : s_(s) {
    rep_.fragments.center_dim = s.map.center_dim;
    if (s.map.kind == MapKind::Toral) {
      results_["map"] = {{"dim", s.map.dim()}, {"linear", s.map.is_linear()}};
    } else {
      // Fixed fibers are cheap and every skew experiment needs them.
      experiment("fibers", [&] { fixed_fibers(); });
    }
  }

  Report finish() {
    if (s_.verify) {
      rep_.verdicts = verify_inequalities(rep_.fragments, s_.tolerances);
      Table t{"verdicts", {"name", "relation", "lhs", "rhs", "tolerance", "status"}, {}};
      for (const auto& v : rep_.verdicts)
        t.add({v.name, v.relation, v.status == VerdictStatus::Skipped ? "" : str(v.lhs),
               v.status == VerdictStatus::Skipped ? "" : str(v.rhs), str(v.tolerance), to_string(v.status)});
      rep_.tables.push_back(std::move(t));
    }
    json verdicts = json::array();
    for (const auto& v : rep_.verdicts) verdicts.push_back(to_json(v));
    std::string status = rep_.execution_error ? "error" : all_pass(rep_.verdicts) ? "pass" : "fail";
    rep_.body = {{"schema_version", kSchemaVersion}, {"generator", "phlab"}, {"scenario", to_json(s_)},
                 {"results", results_},               {"errors", errors_},   {"verdicts", verdicts},
                 {"status", status}};
    rep_.timing = timing_;
    return std::move(rep_);
  }

  template <class F>
  void experiment(const std::string& name, F body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      errors_.push_back({{"experiment", name}, {"error", e.what()}});
      rep_.execution_error = true;
    }
    timing_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void homology() {
    const int k = s_.map.kind == MapKind::Toral ? s_.map.unstable_dim : 1;
    const IntegerMatrix& a = s_.map.matrix;
    const auto growth = topological_growth(a, k);
    class_ = unstable_homology_class(a, k);
    const double residual = check_eigen_relation(exterior_power(a, k), *class_, growth.lambda_w);
    json eig = json::array();
    for (const auto& z : spectrum(a).eigenvalues) eig.push_back({z.real(), z.imag()});
    results_["homology"] = {{"degree", k},
                            {"lambda_w", growth.lambda_w},
                            {"log_lambda_w", std::log(growth.lambda_w)},
                            {"simple", growth.unique},
                            {"class", std::vector<double>(class_->coords.data(), class_->coords.data() + class_->coords.size())},
                            {"eigen_residual", residual},
                            {"eigenvalues", eig}};
    rep_.fragments.lambda_w = growth.lambda_w;
    rep_.fragments.eigen_residual = residual;
  }

  void volume_growth() {
    const GrowthParams& g = *s_.volume_growth;
    const bool skew = s_.map.kind == MapKind::SkewSuspension;
    const ToralDiffeo f = skew ? ToralDiffeo(s_.map.matrix) : s_.map.toral();
    const int k = skew ? 1 : s_.map.unstable_dim;
    GrowthOptions opts;
    opts.max_edge = g.max_edge;
    opts.vertex_budget = g.vertex_budget;
    Table t{"volume_growth", {"direction", "base_point", "radius", "n", "log_volume"}, {}};
    json out;
    const auto sweep = [&](const ToralDiffeo& m, int dim_k, const char* dir) {
      std::vector<double> slopes;
      json samples = json::array();
      for (int i = 0; i < g.base_points; ++i) {
        const Vec x = quasi_random_point(m.dim(), static_cast<std::uint64_t>(i), derive_seed(s_.seed, kGrowth));
        for (double r : g.radii) {
          const auto est = estimate_volume_growth(m, TorusPoint(x), r, dim_k, g.n_max, opts);
          slopes.push_back(est.slope);
          samples.push_back({{"base_point", vec_json(x)}, {"radius", r}, {"slope", est.slope}, {"r_squared", est.r_squared},
                             {"fit_range", {est.n_lo, est.n_hi}}});
          for (std::size_t n = 0; n < est.iterates.size(); ++n)
            t.add({dir, str(i), str(r), str(est.iterates[n]), str(est.log_volumes[n])});
        }
      }
      const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
      out[dir] = {{"chi", *hi}, {"spread", *hi - *lo}, {"degree", dim_k}, {"samples", samples}};
      return std::pair{*hi, *hi - *lo};
    };
    const auto [chi, spread] = sweep(f, k, "unstable");
    rep_.fragments.chi_u_spread = spread;
    if (skew) {
      // chi_u of the skew product: the fastest fixed fiber, time-tau maps scale growth by tau.
      double fastest = 0.0;
      for (const auto& fb : fibers_) fastest = std::max(fastest, SkewProductMap::fiber_speed(fb.y));
      if (fibers_.empty()) throw PreconditionError("circle map has no fixed points");
      out["base_chi"] = chi;
      out["max_fiber_speed"] = fastest;
      out["chi_u"] = fastest * chi;
      rep_.fragments.chi_w = chi;
      rep_.fragments.chi_u = fastest * chi;
    } else {
      out["chi_u"] = chi;
      rep_.fragments.chi_w = chi;
      rep_.fragments.chi_u = chi;
    }
    if (g.stable) {
      const int ks = s_.map.dim() - s_.map.unstable_dim - s_.map.center_dim;
      if (ks < 1) throw PreconditionError("stable growth needs a stable bundle");
      const auto [chi_s, spread_s] = sweep(f.inverse(), ks, "stable");
      out["chi_s"] = chi_s;
      out["chi_s_spread"] = spread_s;
      rep_.fragments.chi_s = chi_s;
    }
    results_["volume_growth"] = out;
    rep_.tables.push_back(std::move(t));
  }

  void current() {
    const CurrentParams& c = *s_.current;
    const ToralDiffeo f = s_.map.toral();
    const int n = f.dim(), k = s_.map.unstable_dim;
    GrowthOptions opts;
    if (s_.volume_growth) {
      opts.max_edge = s_.volume_growth->max_edge;
      opts.vertex_budget = s_.volume_growth->vertex_budget;
    }
    const TorusPoint x(quasi_random_point(n, 0, derive_seed(s_.seed, kCurrent)));
    std::vector<int> e1(static_cast<std::size_t>(n), 0);
    e1[0] = 1;
    if (k != 1) throw PreconditionError("closedness check is implemented for one-dimensional unstable bundles");
    const auto alpha = DifferentialForm::function(TrigPolynomial::mode(n, 1.0 / kTwoPi, e1, Phase::Sin));
    const auto defects = closedness_defects(f, x, c.radius, alpha, c.n_max, opts);
    Table t{"closedness_defects", {"n", "defect", "stokes", "volume"}, {}};
    for (const auto& d : defects) t.add({str(d.n), str(d.defect), str(d.stokes), str(d.volume)});
    std::vector<DefectSample> tail(defects.begin() + std::min<std::ptrdiff_t>(2, static_cast<std::ptrdiff_t>(defects.size()) - 2), defects.end());
    const DecayFit fit = fit_defect_decay(tail);

    PolyPatch last = seed_unstable_disk(f, x, c.radius, k, opts.max_edge, opts.frame);
    iterate_patch(f, last, c.n_max, opts, [&](int, const PolyPatch& p) { last = p; });
    const Eigen::VectorXd cls = empirical_class(last);
    json out = {{"base_point", vec_json(x.coords())},
                {"radius", c.radius},
                {"form", "(1 / 2 pi) sin 2 pi x1"},
                {"defect_n", c.defect_n},
                {"defect", defects[static_cast<std::size_t>(c.defect_n)].defect},
                {"decay_rate", fit.rho},
                {"decay_constant", fit.constant},
                {"empirical_class", std::vector<double>(cls.data(), cls.data() + cls.size())}};
    rep_.fragments.closedness_defect = std::abs(defects[static_cast<std::size_t>(c.defect_n)].defect);
    rep_.fragments.decay_rate = fit.rho;
    if (class_ && class_->coords.size() == cls.size()) {
      const double err = (cls - class_->coords).norm();
      out["class_error"] = err;
      rep_.fragments.current_class_error = err;
    }
    results_["current"] = out;
    rep_.tables.push_back(std::move(t));
  }

  void jacobian() {
    const ToralDiffeo f = s_.map.toral();
    const auto g = jacobian_gap(f, s_.map.unstable_dim, s_.jacobian->samples, derive_seed(s_.seed, kJacobian));
    results_["jacobian"] = {{"degree", s_.map.unstable_dim}, {"samples", g.samples}, {"min_ratio", g.min_ratio},
                            {"argmin", vec_json(g.argmin)}, {"holds", g.holds()}};
    rep_.fragments.jacobian_min_ratio = g.min_ratio;
  }

  static void table_rows(Table& t, const EntropyEstimate& est, const std::string& prefix_value) {
    const auto& tab = est.table;
    for (std::size_t e = 0; e < tab.eps.size(); ++e)
      for (int n = 0; n <= tab.computed(e); ++n) {
        const bool bound = tab.truncated[e] && n == tab.computed(e);
        std::vector<std::string> row;
        if (!prefix_value.empty()) row.push_back(prefix_value);
        row.insert(row.end(), {str(tab.eps[e]), str(n), str(tab.at(e, n)), bound ? "true" : "false"});
        t.add(std::move(row));
      }
  }

  static json estimate_json(const EntropyEstimate& est) {
    json rates = json::array();
    for (const auto& r : est.h_of_eps)
      rates.push_back({{"eps", r.eps}, {"rate", r.rate}, {"r_squared", r.r_squared}, {"fit_range", {r.n_lo, r.n_hi}},
                       {"saturated_at", r.saturated_at}, {"usable", r.usable()}});
    return {{"h_hat", est.h_hat}, {"eps_used", est.eps_used}, {"sample_size", est.table.sample_size},
            {"sampling", est.table.sampling}, {"rates", rates}};
  }

  void entropy() {
    const EntropyParams& p = *s_.entropy;
    if (s_.map.kind == MapKind::SkewSuspension) {
      if (fibers_.empty()) throw PreconditionError("circle map has no fixed points");
      FiberEntropyCache cache(s_.map.matrix, p, derive_seed(s_.seed, kEntropy));
      const auto fibers = fiber_entropies(s_.map.c, s_.map.epsilon, kRootTolerance, cache);
      Table ft{"fibers", {"y", "multiplier", "speed", "h"}, {}};
      Table st{"separated_sets", {"speed", "eps", "n", "count", "lower_bound"}, {}};
      json fj = json::array(), per_speed = json::array();
      double h = 0.0;
      for (const auto& f : fibers) {
        h = std::max(h, f.h);
        ft.add({str(f.y), str(f.multiplier), str(f.speed), str(f.h)});
        fj.push_back({{"y", f.y}, {"multiplier", f.multiplier}, {"speed", f.speed}, {"h", f.h}});
      }
      for (double speed : cache.speeds()) {
        const auto& est = cache.estimate(speed);
        table_rows(st, est, str(speed));
        json e = estimate_json(est);
        e["speed"] = speed;
        per_speed.push_back(e);
      }
      results_["entropy"] = {{"h_hat", h}, {"fibers", fj}, {"fiber_estimates", per_speed}, {"distinct_estimates", cache.distinct()}};
      rep_.fragments.h_top = h;
      rep_.tables.push_back(std::move(ft));
      rep_.tables.push_back(std::move(st));
      return;
    }
    const ToralDynamics dyn(s_.map.toral());
    std::vector<double> sample = grid_sample(p.grid, true, derive_seed(s_.seed, kEntropy));
    shuffle_points(sample, p.grid.size(), derive_seed(s_.seed, kEntropy + 1));
    EntropyOptions opts;
    opts.n_min = p.n_min;
    opts.saturation_fraction = p.saturation_fraction;
    Table st{"separated_sets", {"eps", "n", "count", "lower_bound"}, {}};
    // Record the table even when no eps is usable.
    SeparatedSetTable table = separated_table(dyn, p.eps_ladder, p.n_max, sample, sampling_label(p.grid), opts);
    EntropyEstimate shell;
    shell.table = table;
    table_rows(st, shell, "");
    rep_.tables.push_back(std::move(st));
    const EntropyEstimate est = fit_entropy(std::move(table), opts);
    results_["entropy"] = estimate_json(est);
    rep_.fragments.h_top = est.h_hat;
  }

  void measure_entropy() {
    const MeasureEntropyParams& p = *s_.measure_entropy;
    const ToralDynamics dyn(s_.map.toral());
    MeasureEntropyOptions opts;
    opts.m_max = p.m_max;
    opts.plateau_tolerance = p.plateau_tolerance;
    opts.min_word_count = p.min_word_count;
    opts.rare_mass_limit = p.rare_mass_limit;
    const auto est = estimate_measure_entropy(dyn, GridPartition(p.partition), p.orbit_length, p.burn_in,
                                              derive_seed(s_.seed, kMeasure), opts);
    Table t{"conditional_entropy", {"m", "value", "distinct_words", "rarest_word_count", "rare_mass", "undersampled"}, {}};
    json cond = json::array();
    for (const auto& c : est.conditional) {
      t.add({str(c.m), str(c.value), str(c.distinct_words), str(c.rarest_word_count), str(c.rare_mass), c.undersampled ? "true" : "false"});
      cond.push_back({{"m", c.m}, {"value", c.value}, {"distinct_words", c.distinct_words},
                      {"rarest_word_count", c.rarest_word_count}, {"rare_mass", c.rare_mass}, {"undersampled", c.undersampled}});
    }
    results_["measure_entropy"] = {{"h_nu", est.h},          {"m_used", est.m_used},     {"plateau_found", est.plateau_found},
                                   {"biased_low", est.biased_low}, {"orbit_length", est.orbit_length}, {"partition", p.partition},
                                   {"conditional", cond}};
    rep_.fragments.h_nu = est.h;
    rep_.tables.push_back(std::move(t));
  }

  void lyapunov() {
    const LyapunovParams& p = *s_.lyapunov;
    const ToralDiffeo f = s_.map.toral();
    LyapunovOptions opts;
    opts.reorth_every = p.reorth_every;
    opts.warmup = p.warmup;
    const auto ens = lyapunov_ensemble(f, p.orbits, p.iterates, derive_seed(s_.seed, kLyapunov), opts);
    const auto bands = ExponentBands::from_constants(PHConstants::from_linear(s_.map.matrix), p.band_margin);
    const auto cls = classify_exponents(ens.mean, bands);
    const auto& first = ens.orbits.front();
    const auto back = inverse_spectrum_on_orbit(f, first.seed, p.iterates, opts);
    double anti = 0.0;
    const std::size_t n = first.exponents.size();
    for (std::size_t i = 0; i < n; ++i) anti = std::max(anti, std::abs(back.exponents[i] + first.exponents[n - 1 - i]));
    Table t{"lyapunov", {"orbit", "index", "exponent", "convergence_gap"}, {}};
    json orbits = json::array();
    double gap = 0.0;
    for (std::size_t o = 0; o < ens.orbits.size(); ++o) {
      const auto& sp = ens.orbits[o];
      gap = std::max(gap, sp.max_gap());
      for (std::size_t i = 0; i < n; ++i) t.add({str(o), str(i), str(sp.exponents[i]), str(sp.convergence_gap[i])});
      orbits.push_back({{"seed_point", vec_json(sp.seed)}, {"exponents", sp.exponents}, {"convergence_gap", sp.convergence_gap}});
    }
    results_["lyapunov"] = {{"exponents", ens.mean},
                            {"spread", ens.spread},
                            {"max_convergence_gap", gap},
                            {"bands", {bands.lower(), bands.upper()}},
                            {"stable", cls.stable},
                            {"center", cls.center},
                            {"unstable", cls.unstable},
                            {"center_term", cls.center_term},
                            {"ambiguous", cls.ambiguous},
                            {"inverse_exponents", back.exponents},
                            {"antisymmetry_error", anti},
                            {"orbits", orbits}};
    rep_.fragments.exponents = ens.mean;
    rep_.fragments.center_term = cls.center_term;
    rep_.fragments.antisymmetry_error = anti;
    rep_.tables.push_back(std::move(t));
  }

 private:
  void fixed_fibers() {
    fibers_ = circle_fixed_points(CircleMap(s_.map.c, s_.map.epsilon), kRootTolerance);
    json fj = json::array();
    for (const auto& fp : fibers_)
      fj.push_back({{"y", fp.y}, {"multiplier", fp.multiplier}, {"speed", SkewProductMap::fiber_speed(fp.y)}});
    results_["map"] = {{"dim", 4}, {"side", bifurcation_side(s_.map.c, s_.map.epsilon)}, {"fixed_fibers", fj}};
  }

  const Scenario& s_;
  Report rep_;
  json results_ = json::object();
  json errors_ = json::array();
  json timing_ = json::object();
  std::optional<HomologyClass> class_;
  std::vector<CircleFixedPoint> fibers_;
};

}  // namespace

Report run_scenario(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Run run(s);
  if (s.homology) run.experiment("homology", [&] { run.homology(); });
  if (s.volume_growth) run.experiment("volume_growth", [&] { run.volume_growth(); });
  if (s.current) run.experiment("current", [&] { run.current(); });
  if (s.jacobian) run.experiment("jacobian", [&] { run.jacobian(); });
  if (s.entropy) run.experiment("entropy", [&] { run.entropy(); });
  if (s.measure_entropy) run.experiment("measure_entropy", [&] { run.measure_entropy(); });
  if (s.lyapunov) run.experiment("lyapunov", [&] { run.lyapunov(); });
  Report r = run.finish();
  r.timing["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<Verdict> cross_scenario_verdicts(const std::vector<Report>& reports, double tolerance) {
  std::vector<double> h;
  for (const auto& r : reports) {
    const std::string name = r.body.at("scenario").at("name").get<std::string>();
    if ((name == "ph3" || name.rfind("ph3-perturbed-", 0) == 0) && r.fragments.h_top) h.push_back(*r.fragments.h_top);
  }
  const std::string name = "h constant across the ph3 perturbation amplitudes";
  if (h.size() < 2) return {skipped_verdict(name, "<=", "fewer than two ph3 family entropies")};
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  return {make_verdict(name, "<=", *hi - *lo, 0.0, tolerance)};
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_csv(const Table& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << csv_cell(t.header[i]);
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << "\n";
  }
}

}  // namespace

void write_report(const json& document, const std::vector<Table>& tables, const std::filesystem::path& dir,
                  const std::string& stem) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (stem + ".json"));
    if (!out) throw std::runtime_error("cannot write " + (dir / (stem + ".json")).string());
    out << document.dump(2) << "\n";
  }
  for (const auto& t : tables) write_csv(t, dir / (stem + "_" + t.name + ".csv"));
}

}  // namespace phlab
