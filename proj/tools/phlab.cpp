#include "phlab/core/parallel.hpp"
#include "phlab/lab/catalog.hpp"
#include "phlab/lab/discontinuity.hpp"
#include "phlab/lab/runner.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

using namespace phlab;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string builtin;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 0;
};

std::filesystem::path out_dir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("PHLAB_OUT_DIR"); env && *env) return env;
  return "phlab-out";
}

void apply_threads(const Options& o) {
  const unsigned hw = std::thread::hardware_concurrency();
  set_thread_count(o.threads > 0 ? o.threads : static_cast<int>(hw ? hw : 1));
}

// Scenarios named by --config or --builtin; the whole catalog when neither is given and `all_by_default`.
std::vector<Scenario> selected(const Options& o, bool all_by_default) {
  std::vector<Scenario> out;
  if (!o.config.empty() && !o.builtin.empty()) throw ScenarioError("--config and --builtin are mutually exclusive");
  if (!o.config.empty()) out.push_back(load_scenario(o.config));
  else if (o.builtin == "all" || (o.builtin.empty() && all_by_default)) out = builtin_catalog();
  else if (!o.builtin.empty()) out.push_back(find_builtin(o.builtin));
  else throw ScenarioError("give --config PATH or --builtin NAME");
  if (o.seed)
    for (auto& s : out) s.seed = *o.seed;
  return out;
}

void print_verdicts(const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    const char* tag = v.status == VerdictStatus::Pass ? "PASS" : v.status == VerdictStatus::Fail ? "FAIL" : "SKIP";
    if (v.status == VerdictStatus::Skipped) {
      std::printf("  %s  %s  (%s)\n", tag, v.name.c_str(), v.reason.c_str());
    } else {
      std::printf("  %s  %s  lhs=%.6g %s rhs=%.6g tol=%.3g\n", tag, v.name.c_str(), v.lhs, v.relation.c_str(), v.rhs,
                  v.tolerance);
    }
  }
}

int combine(int a, int b) {
  if (a == 1 || b == 1) return 1;
  return std::max(a, b);
}

int cmd_run(const Options& o, bool verdicts_only) {
  apply_threads(o);
  const auto scenarios = selected(o, verdicts_only);
  const auto dir = out_dir(o);
  std::vector<Report> reports;
  int code = 0;
  for (const auto& s : scenarios) {
    Report r = run_scenario(s);
    std::printf("%s: %s (%.1f s)\n", s.name.c_str(), r.body["status"].get<std::string>().c_str(),
                r.timing["total"].get<double>());
    for (const auto& e : r.body["errors"])
      std::printf("  ERROR %s: %s\n", e["experiment"].get<std::string>().c_str(), e["error"].get<std::string>().c_str());
    print_verdicts(r.verdicts);
    if (!verdicts_only) write_report(r.document(), r.tables, dir, s.name);
    code = combine(code, r.exit_code());
    reports.push_back(std::move(r));
  }
  const auto cross = cross_scenario_verdicts(reports);
  if (reports.size() > 1) {
    std::printf("catalog:\n");
    print_verdicts(cross);
    if (!all_pass(cross)) code = combine(code, 2);
  }
  if (verdicts_only) {
    json per = json::array(), cj = json::array();
    Table t{"verdicts", {"scenario", "name", "relation", "lhs", "rhs", "tolerance", "status"}, {}};
    for (const auto& r : reports) {
      const std::string name = r.body["scenario"]["name"];
      per.push_back({{"scenario", name}, {"status", r.body["status"]}, {"errors", r.body["errors"]}, {"verdicts", r.body["verdicts"]}});
      for (const auto& v : r.verdicts)
        t.add({name, v.name, v.relation, csv_number(v.lhs), csv_number(v.rhs), csv_number(v.tolerance), to_string(v.status)});
    }
    for (const auto& v : cross) {
      cj.push_back(to_json(v));
      t.add({"catalog", v.name, v.relation, csv_number(v.lhs), csv_number(v.rhs), csv_number(v.tolerance), to_string(v.status)});
    }
    const json doc = {{"schema_version", kSchemaVersion}, {"generator", "phlab"}, {"command", "verify"},
                      {"scenarios", per},                 {"catalog_verdicts", cj},
                      {"status", code == 0 ? "pass" : code == 2 ? "fail" : "error"}};
    write_report(doc, {t}, dir, "verify");
  } else if (reports.size() > 1) {
    json cj = json::array();
    for (const auto& v : cross) cj.push_back(to_json(v));
    write_report({{"schema_version", kSchemaVersion}, {"generator", "phlab"}, {"command", "run"}, {"catalog_verdicts", cj}},
                 {}, dir, "catalog_verdicts");
  }
  std::printf("wrote %s\n", dir.string().c_str());
  return code;
}

int cmd_catalog(const Options& o) {
  if (!o.config.empty()) throw ScenarioError("catalog takes --builtin NAME, not --config");
  if (!o.builtin.empty() && o.builtin != "all") {
    Scenario s = find_builtin(o.builtin);
    if (o.seed) s.seed = *o.seed;
    std::cout << to_json(s).dump(2) << "\n";
    return 0;
  }
  for (const auto& s : builtin_catalog()) {
    const char* kind = s.map.kind == MapKind::Toral ? "toral" : "skew-suspension";
    std::printf("%-28s %-16s dim=%d unstable=%d center=%d  %s\n", s.name.c_str(), kind, s.map.kind == MapKind::Toral ? s.map.dim() : 4,
                s.map.unstable_dim, s.map.center_dim, s.description.c_str());
  }
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    for (auto s : builtin_catalog()) {
      if (o.seed) s.seed = *o.seed;
      std::ofstream(std::filesystem::path(o.out) / (s.name + ".json")) << to_json(s).dump(2) << "\n";
    }
    std::printf("wrote %s\n", o.out.c_str());
  }
  return 0;
}

int cmd_discontinuity(const Options& o) {
  apply_threads(o);
  if (!o.builtin.empty()) throw ScenarioError("discontinuity takes --config PATH, not --builtin");
  DiscontinuityParams p;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw ScenarioError(o.config + ": cannot open");
    p = discontinuity_params_from_json(json::parse(in));
  }
  if (o.seed) p.seed = *o.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const DiscontinuityResult r = discontinuity_experiment(p);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::printf("h(g_1) = %.6f  h(g_2) = %.6f  distinct fiber estimates: %zu\n", r.h_g1, r.h_g2, r.distinct_estimates);
  std::printf("%10s  %-12s %6s %9s %9s %7s\n", "eps", "side", "fibers", "max_speed", "h", "ratio");
  for (const auto& row : r.rows)
    std::printf("%10.6g  %-12s %6d %9.6f %9.6f %7.4f\n", row.eps, row.side.c_str(), row.fibers, row.max_speed, row.h, row.ratio);
  print_verdicts(r.verdicts);

  Table fibers{"fibers", {"eps", "y", "multiplier", "speed", "h"}, {}};
  for (const auto& f : r.fibers)
    fibers.add({csv_number(f.eps), csv_number(f.y), csv_number(f.multiplier), csv_number(f.speed), csv_number(f.h)});
  Table jump{"jump_table", {"eps", "side", "fibers", "max_speed", "h", "ratio"}, {}};
  for (const auto& row : r.rows)
    jump.add({csv_number(row.eps), row.side, std::to_string(row.fibers), csv_number(row.max_speed), csv_number(row.h), csv_number(row.ratio)});
  const int code = all_pass(r.verdicts) ? 0 : 2;
  json doc = {{"schema_version", kSchemaVersion}, {"generator", "phlab"},     {"command", "discontinuity"},
              {"params", to_json(p)},             {"results", to_json(r)},    {"status", code == 0 ? "pass" : "fail"},
              {"timing", {{"total", secs}}}};
  const auto dir = out_dir(o);
  write_report(doc, {fibers, jump}, dir, "discontinuity");
  std::printf("wrote %s\n", dir.string().c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on partially hyperbolic toral maps and skew suspensions"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  const auto common = [&](CLI::App* sub, bool with_threads) {
    sub->add_option("--config", o.config, "Scenario JSON document")->check(CLI::ExistingFile);
    sub->add_option("--builtin", o.builtin, "Built-in scenario name, or \"all\"");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--out", o.out, "Output directory (default $PHLAB_OUT_DIR or ./phlab-out)");
    if (with_threads) sub->add_option("--threads", o.threads, "Worker threads; affects wall time only")->check(CLI::Range(1, 1024));
  };
  auto* run = app.add_subcommand("run", "Run a scenario and write its JSON report and CSV tables");
  auto* catalog = app.add_subcommand("catalog", "List built-in scenarios or print one as JSON");
  auto* verify = app.add_subcommand("verify", "Run scenarios (default: whole catalog) and report verdicts only");
  auto* disc = app.add_subcommand("discontinuity", "Entropy jump of the skew suspension across the saddle-node");
  common(run, true);
  common(catalog, false);
  common(verify, true);
  common(disc, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  for (auto* sub : {run, catalog, verify, disc})
    if (sub->count("--seed") > 0) o.seed = seed;

  try {
    if (*run) return cmd_run(o, false);
    if (*catalog) return cmd_catalog(o);
    if (*verify) return cmd_run(o, true);
    if (*disc) return cmd_discontinuity(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
