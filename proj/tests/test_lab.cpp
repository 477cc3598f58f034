#include "phlab/core/circle_map.hpp"
#include "phlab/core/parallel.hpp"
#include "phlab/lab/catalog.hpp"
#include "phlab/lab/discontinuity.hpp"
#include "phlab/lab/runner.hpp"
#include "phlab/lab/scenario.hpp"
#include "phlab/lab/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace phlab;
using nlohmann::json;

namespace {

// cat2 with budgets small enough for a unit test.
Scenario small_cat() {
  Scenario s = find_builtin("cat2");
  s.name = "cat2-small";
  s.volume_growth->base_points = 2;
  s.volume_growth->radii = {0.1};
  s.entropy = EntropyParams{{0.2, 0.1}, 6, {96, 96}, 0.05, 2};
  s.measure_entropy->partition = {2, 2};
  s.measure_entropy->orbit_length = 1000000;
  s.measure_entropy->m_max = 12;
  s.measure_entropy->plateau_tolerance = 0.005;
  s.lyapunov->orbits = 2;
  s.lyapunov->iterates = 2000;
  s.jacobian->samples = 200;
  return s;
}

json minimal_doc() {
  return json::parse(R"({
    "schema_version": 1, "name": "m", "seed": 3,
    "map": {"matrix": [[2, 1], [1, 1]]},
    "experiments": {"homology": {}}
  })");
}

std::string parse_error(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

const Verdict* find(const std::vector<Verdict>& v, const std::string& name) {
  for (const auto& x : v)
    if (x.name == name) return &x;
  return nullptr;
}

}  // namespace

TEST_CASE("scenario documents round-trip") {
  for (const auto& s : builtin_catalog()) {
    const json doc = to_json(s);
    const Scenario back = scenario_from_json(doc);
    CHECK(to_json(back) == doc);
    CHECK(back.seed == s.seed);
    CHECK(doc["schema_version"].is_number_integer());
  }
  const Scenario m = scenario_from_json(minimal_doc());
  CHECK(m.homology);
  CHECK_FALSE(m.entropy.has_value());
  CHECK(m.map.matrix == IntegerMatrix({{2, 1}, {1, 1}}));
}

TEST_CASE("scenario validation names the offending field") {
  json d = minimal_doc();
  d.erase("seed");
  CHECK(parse_error(d).find("scenario.seed") != std::string::npos);

  d = minimal_doc();
  d["seed"] = -4;
  CHECK(parse_error(d).find("scenario.seed") != std::string::npos);

  d = minimal_doc();
  d["colour"] = "blue";
  CHECK(parse_error(d).find("scenario.colour: unknown field") != std::string::npos);

  d = minimal_doc();
  d["schema_version"] = 2;
  CHECK(parse_error(d).find("unsupported version") != std::string::npos);

  d = minimal_doc();
  d["map"]["matrix"] = json::parse("[[2, 0], [0, 1]]");
  CHECK(parse_error(d).find("determinant") != std::string::npos);

  d = minimal_doc();
  d["experiments"]["entropy"] = json::parse(R"({"eps_ladder": [0.1, 0.2], "grid": [16, 16]})");
  CHECK(parse_error(d).find("strictly decreasing") != std::string::npos);

  d = minimal_doc();
  d["experiments"]["entropy"] = json::parse(R"({"grid": [16, 16, 16]})");
  CHECK(parse_error(d).find("experiments.entropy.grid") != std::string::npos);

  d = minimal_doc();
  d["experiments"]["lyapunov"] = json::parse(R"({"iterates": 10})");
  CHECK(parse_error(d).find("experiments.lyapunov.iterates: out of range") != std::string::npos);

  d = minimal_doc();
  d["map"]["amplitude"] = 0.9;
  d["map"]["perturbation"] = json::parse(R"([{"coefficient": [1, 0], "frequency": [0, 3]}])");
  CHECK(parse_error(d).find("map:") != std::string::npos);  // contraction certificate fails

  d = minimal_doc();
  d["map"]["kind"] = "skew-suspension";
  d["experiments"]["lyapunov"] = json::object();
  CHECK(parse_error(d).find("skew-suspension") != std::string::npos);
}

TEST_CASE("catalog contents") {
  const auto cat = builtin_catalog();
  CHECK(cat.size() >= 6);
  std::set<std::string> names;
  for (const auto& s : cat) names.insert(s.name);
  for (const char* n : {"cat2", "ph3", "ph3-perturbed-0.01", "ph3-perturbed-0.02", "t4-product", "skew-suspension-0",
                        "skew-suspension-plus0.005", "skew-suspension-minus0.005"})
    CHECK(names.count(n) == 1);
  CHECK(find_builtin("ph3").map.center_dim == 1);
  CHECK(find_builtin("cat2").map.center_dim == 0);
  CHECK(find_builtin("t4-product").map.unstable_dim == 2);
  CHECK_THROWS_AS(find_builtin("nope"), ScenarioError);
  std::set<std::uint64_t> seeds;
  for (const auto& s : cat) seeds.insert(s.seed);
  CHECK(seeds.size() == cat.size());
}

TEST_CASE("skew-suspension-0 fibers sit at 0, 1/4, 1/2 with speeds 1, 2, 1") {
  const Scenario s = find_builtin("skew-suspension-0");
  const auto fps = circle_fixed_points(CircleMap(s.map.c, s.map.epsilon), 1e-10);
  REQUIRE(fps.size() == 3);
  const double ys[] = {0.0, 0.25, 0.5};
  const double speeds[] = {1.0, 2.0, 1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(fps[i].y - ys[i]) < 1e-10);
    // sin 2 pi y - sin^2 2 pi y vanishes exactly where sin 2 pi y is 0 or 1.
    CHECK(std::abs(1.0 + std::sin(kTwoPi * fps[i].y) - speeds[i]) < 1e-10);
  }
  CHECK(bifurcation_side(0.05, 0.0) == "critical");
  CHECK(bifurcation_side(0.05, 0.005) == "annihilation");
  CHECK(bifurcation_side(0.05, -0.005) == "creation");
}

TEST_CASE("verdict relations") {
  CHECK(make_verdict("a", ">=", 0.92, 0.96, 0.05).status == VerdictStatus::Pass);
  CHECK(make_verdict("a", ">=", 0.90, 0.96, 0.05).status == VerdictStatus::Fail);
  CHECK(make_verdict("a", "<=", 1.0, 0.96, 0.05).status == VerdictStatus::Pass);
  CHECK(make_verdict("a", "=", 1.0, 0.96, 0.01).status == VerdictStatus::Fail);
  CHECK(make_verdict("a", "<", 0.5, 0.5, 0.0).status == VerdictStatus::Fail);
  CHECK(make_verdict("a", ">", 2.6, 1.0, 0.0).status == VerdictStatus::Pass);
  CHECK(make_verdict("a", "=", NAN, 0.0, 1.0).status == VerdictStatus::Fail);
  CHECK_THROWS_AS(make_verdict("a", "~", 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("verify suite: pass, injected violation, skipped inputs") {
  ResultFragments r;
  r.chi_u = 0.962;
  r.chi_w = 0.962;
  r.lambda_w = (3.0 + std::sqrt(5.0)) / 2.0;
  r.h_top = 0.96;
  const Tolerances tol;
  auto v = verify_inequalities(r, tol);
  REQUIRE(find(v, "h >= chi_u") != nullptr);
  CHECK(find(v, "h >= chi_u")->status == VerdictStatus::Pass);
  CHECK(find(v, "chi_u = ln lambda_W")->status == VerdictStatus::Pass);
  const Verdict* refined = find(v, "h_nu <= sum of positive center exponents + chi_u");
  REQUIRE(refined != nullptr);
  CHECK(refined->status == VerdictStatus::Skipped);
  CHECK(refined->reason.find("measure entropy") != std::string::npos);
  CHECK(find(v, "h = max(chi_u, chi_s)") == nullptr);  // no one-dimensional center
  CHECK(all_pass(v));

  // Injection: h_nu exceeds the bound by 0.5.
  r.center_term = 0.0;
  r.h_nu = *r.chi_u + *r.center_term + 0.5;
  v = verify_inequalities(r, tol);
  CHECK(find(v, "h_nu <= sum of positive center exponents + chi_u")->status == VerdictStatus::Fail);
  CHECK_FALSE(all_pass(v));

  ResultFragments c;
  c.center_dim = 1;
  c.h_top = 0.95;
  c.chi_u = 0.962;
  c.chi_s = 0.962;
  v = verify_inequalities(c, tol);
  REQUIRE(find(v, "h = max(chi_u, chi_s)") != nullptr);
  CHECK(find(v, "h = max(chi_u, chi_s)")->status == VerdictStatus::Pass);
  c.h_top = 0.8;
  CHECK(find(verify_inequalities(c, tol), "h = max(chi_u, chi_s)")->status == VerdictStatus::Fail);

  const json j = to_json(find(v, "h_nu <= sum of positive exponents") ? *find(v, "h_nu <= sum of positive exponents") : v[0]);
  CHECK(j["status"] == "skipped");
  CHECK(j.contains("reason"));
}

TEST_CASE("run_scenario on a small cat map") {
  const Scenario s = small_cat();
  const Report r = run_scenario(s);
  CHECK_FALSE(r.execution_error);
  CHECK(r.body["status"] == "pass");
  CHECK(r.exit_code() == 0);
  CHECK(r.body["schema_version"] == kSchemaVersion);
  CHECK(r.body["scenario"]["name"] == "cat2-small");
  CHECK_FALSE(r.body.contains("timing"));
  CHECK(r.document().contains("timing"));
  const auto& res = r.body["results"];
  for (const char* k : {"homology", "volume_growth", "current", "jacobian", "entropy", "measure_entropy", "lyapunov"})
    CHECK(res.contains(k));
  CHECK(std::abs(res["homology"]["lambda_w"].get<double>() - 2.618034) < 1e-6);
  CHECK(std::abs(res["lyapunov"]["exponents"][0].get<double>() - 0.962424) < 1e-6);
  CHECK(res["entropy"]["h_hat"].get<double>() > 0.8);
  std::set<std::string> tables;
  for (const auto& t : r.tables) tables.insert(t.name);
  for (const char* k : {"separated_sets", "volume_growth", "closedness_defects", "conditional_entropy", "lyapunov", "verdicts"})
    CHECK(tables.count(k) == 1);
}

TEST_CASE("reports are identical across thread counts") {
  const Scenario s = small_cat();
  const int saved = thread_count();
  set_thread_count(1);
  const std::string a = run_scenario(s).body.dump();
  set_thread_count(3);
  const std::string b = run_scenario(s).body.dump();
  set_thread_count(saved);
  CHECK(a == b);
}

TEST_CASE("errors are captured into the report") {
  Scenario s = small_cat();
  s.entropy = EntropyParams{{0.01}, 6, {16, 16}, 0.02, 2};
  const Report r = run_scenario(s);
  CHECK(r.execution_error);
  CHECK(r.exit_code() == 1);
  CHECK(r.body["status"] == "error");
  REQUIRE(r.body["errors"].size() == 1);
  CHECK(r.body["errors"][0]["experiment"] == "entropy");
  CHECK(r.body["errors"][0]["error"].get<std::string>().rfind("all eps saturated", 0) == 0);
  // The separated-set table is still reported and the verdicts that need h are skipped.
  bool has_table = false;
  for (const auto& t : r.tables) has_table |= t.name == "separated_sets";
  CHECK(has_table);
  const Verdict* v = find(r.verdicts, "h >= chi_u");
  REQUIRE(v != nullptr);
  CHECK(v->status == VerdictStatus::Skipped);
}

TEST_CASE("a failed verdict gives exit code 2") {
  Scenario s = small_cat();
  s.tolerances.closedness = 0.0;  // the defect is small but not zero
  const Report r = run_scenario(s);
  CHECK_FALSE(r.execution_error);
  CHECK(r.body["status"] == "fail");
  CHECK(r.exit_code() == 2);
}

TEST_CASE("cross-scenario entropy spread") {
  auto fake = [](const std::string& name, double h) {
    Report r;
    r.body = {{"scenario", {{"name", name}}}};
    r.fragments.h_top = h;
    return r;
  };
  auto v = cross_scenario_verdicts({fake("ph3", 0.91), fake("ph3-perturbed-0.01", 0.93), fake("cat2", 0.5)});
  REQUIRE(v.size() == 1);
  CHECK(v[0].status == VerdictStatus::Pass);
  CHECK(std::abs(v[0].lhs - 0.02) < 1e-12);
  v = cross_scenario_verdicts({fake("ph3", 0.91), fake("ph3-perturbed-0.02", 0.99)});
  CHECK(v[0].status == VerdictStatus::Fail);
  CHECK(cross_scenario_verdicts({fake("cat2", 0.9)})[0].status == VerdictStatus::Skipped);
}

TEST_CASE("report files") {
  const auto dir = std::filesystem::temp_directory_path() / "phlab_test_report";
  std::filesystem::remove_all(dir);
  Table t{"demo", {"a", "b"}, {}};
  t.add({"1", "x,y"});
  t.add({csv_number(0.1), "say \"hi\""});
  write_report({{"schema_version", 1}}, {t}, dir, "r");
  std::ifstream csv(dir / "r_demo.csv");
  std::stringstream ss;
  ss << csv.rdbuf();
  CHECK(ss.str() == "a,b\n1,\"x,y\"\n0.1,\"say \"\"hi\"\"\"\n");
  std::ifstream js(dir / "r.json");
  CHECK(json::parse(js)["schema_version"] == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("fiber estimates are shared between equal speeds") {
  EntropyParams p{{0.4, 0.3}, 5, {32, 32, 8}, 0.5, 1};
  FiberEntropyCache cache(IntegerMatrix{{2, 1}, {1, 1}}, p, 5);
  const auto fibers = fiber_entropies(0.05, 0.0, 1e-10, cache);
  REQUIRE(fibers.size() == 3);
  CHECK(cache.distinct() == 2);  // y = 0 and y = 1/2 both run at speed 1
  CHECK(fibers[0].h == fibers[2].h);
  CHECK(fibers[1].h > fibers[0].h);
  const auto after = fiber_entropies(0.05, 0.005, 1e-10, cache);
  CHECK(after.size() == 2);
  for (const auto& f : after) CHECK(f.speed < 1.0);
}

TEST_CASE("discontinuity parameters") {
  DiscontinuityParams p;
  p.eps_list = {0.0, 0.005};
  CHECK_THROWS_AS(discontinuity_experiment(p), std::invalid_argument);

  const json doc = to_json(DiscontinuityParams{});
  const DiscontinuityParams back = discontinuity_params_from_json(json{{"schema_version", 1}, {"seed", 4}, {"eps_list", {0.0, 0.01, -0.01}}});
  CHECK(back.seed == 4);
  CHECK(back.eps_list.size() == 3);
  CHECK(doc["schema_version"] == 1);
  CHECK_THROWS_AS(discontinuity_params_from_json(json{{"schema_version", 1}}), ScenarioError);
  CHECK_THROWS_AS(discontinuity_params_from_json(json{{"schema_version", 1}, {"seed", 1}, {"extra", 2}}), ScenarioError);
}
