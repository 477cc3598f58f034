#pragma once

#include "phlab/lab/scenario.hpp"
#include "phlab/lab/verify.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace phlab {

/// Flat table for external plotting, written as CSV.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

/// Round-trip rendering of a double for CSV cells.
std::string csv_number(double x);

struct Report {
  /// Deterministic given (scenario, seed): everything except timing.
  nlohmann::json body;
  nlohmann::json timing;
  ResultFragments fragments;
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  bool execution_error = false;

  /// 1 on an execution error, 2 on a failed verdict, 0 otherwise.
  int exit_code() const;
  /// body plus the timing section.
  nlohmann::json document() const;
};

/// Runs the requested experiments in dependency order (homology, foliation,
/// entropy and lyapunov, verify). Module errors are captured into the report
/// and mark it as an execution error.
Report run_scenario(const Scenario& scenario);

/// Verdicts spanning several scenarios of one run: the entropy of the ph3
/// family varies by less than `tolerance` across the perturbation amplitudes.
std::vector<Verdict> cross_scenario_verdicts(const std::vector<Report>& reports, double tolerance = 0.05);

/// Writes <dir>/<stem>.json and <dir>/<stem>_<table>.csv for every table.
void write_report(const nlohmann::json& document, const std::vector<Table>& tables, const std::filesystem::path& dir,
                  const std::string& stem);

}  // namespace phlab
