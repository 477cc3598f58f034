#pragma once

#include "phlab/lab/scenario.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace phlab {

enum class VerdictStatus { Pass, Fail, Skipped };

std::string to_string(VerdictStatus s);

/// One checked relation lhs <relation> rhs within tolerance.
struct Verdict {
  std::string name;      // the relation tested, e.g. "h >= chi_u"
  std::string relation;  // ">=", "<=", "=", "<", ">"
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  VerdictStatus status = VerdictStatus::Skipped;
  std::string reason;  // why a verdict was skipped
};

/// `lhs >= rhs - tol`, `lhs <= rhs + tol`, `|lhs - rhs| <= tol`, `lhs < rhs`, `lhs > rhs`.
Verdict make_verdict(std::string name, std::string relation, double lhs, double rhs, double tolerance);
Verdict skipped_verdict(std::string name, std::string relation, std::string reason);

nlohmann::json to_json(const Verdict& v);

/// Estimates gathered from one scenario run; absent entries skip the
/// verdicts that need them.
struct ResultFragments {
  int center_dim = 0;
  std::optional<double> lambda_w;
  std::optional<double> eigen_residual;
  std::optional<double> chi_w;  // growth of the foliation whose homology class was computed
  std::optional<double> chi_u;
  std::optional<double> chi_u_spread;
  std::optional<double> chi_s;
  std::optional<double> h_top;
  std::optional<double> h_nu;
  std::optional<std::vector<double>> exponents;
  std::optional<double> center_term;
  std::optional<double> antisymmetry_error;
  std::optional<double> closedness_defect;
  std::optional<double> decay_rate;
  std::optional<double> current_class_error;
  std::optional<double> jacobian_min_ratio;
};

/// The full verdict list for one scenario. The h = max(chi_u, chi_s) identity
/// is checked only when center_dim == 1.
std::vector<Verdict> verify_inequalities(const ResultFragments& r, const Tolerances& tol);

bool all_pass(const std::vector<Verdict>& v);

}  // namespace phlab
