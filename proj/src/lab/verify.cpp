#include "phlab/lab/verify.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phlab {

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Pass: return "pass";
    case VerdictStatus::Fail: return "fail";
    case VerdictStatus::Skipped: return "skipped";
  }
  return "skipped";
}

Verdict make_verdict(std::string name, std::string relation, double lhs, double rhs, double tolerance) {
  bool ok = false;
  if (relation == ">=") ok = lhs >= rhs - tolerance;
  else if (relation == "<=") ok = lhs <= rhs + tolerance;
  else if (relation == "=") ok = std::abs(lhs - rhs) <= tolerance;
  else if (relation == "<") ok = lhs < rhs;
  else if (relation == ">") ok = lhs > rhs;
  else throw std::invalid_argument("unknown relation " + relation);
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) ok = false;
  Verdict v;
  v.name = std::move(name);
  v.relation = std::move(relation);
  v.lhs = lhs;
  v.rhs = rhs;
  v.tolerance = tolerance;
  v.status = ok ? VerdictStatus::Pass : VerdictStatus::Fail;
  return v;
}

Verdict skipped_verdict(std::string name, std::string relation, std::string reason) {
  Verdict v;
  v.name = std::move(name);
  v.relation = std::move(relation);
  v.status = VerdictStatus::Skipped;
  v.reason = std::move(reason);
  return v;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j = {{"name", v.name}, {"relation", v.relation}, {"status", to_string(v.status)}};
  if (v.status == VerdictStatus::Skipped) {
    j["reason"] = v.reason;
  } else {
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    j["tolerance"] = v.tolerance;
  }
  return j;
}

namespace {

std::string missing(std::initializer_list<std::pair<bool, const char*>> need) {
  std::string out;
  for (const auto& [present, what] : need)
    if (!present) out += (out.empty() ? "missing " : ", ") + std::string(what);
  return out;
}

}  // namespace

std::vector<Verdict> verify_inequalities(const ResultFragments& r, const Tolerances& tol) {
  std::vector<Verdict> out;
  auto add = [&](const char* name, const char* rel, std::initializer_list<std::pair<bool, const char*>> need,
                 auto compute) {
    const std::string why = missing(need);
    if (!why.empty()) out.push_back(skipped_verdict(name, rel, why));
    else out.push_back(compute(name, rel));
  };

  add("H_k(f) h_C = lambda_W h_C", "=", {{r.eigen_residual.has_value(), "homology class"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.eigen_residual, 0.0, tol.eigen_residual); });

  add("chi_u = ln lambda_W", "=", {{r.chi_w.has_value(), "volume growth"}, {r.lambda_w.has_value(), "topological growth"}},
      [&](const char* n, const char* rel) {
        return make_verdict(n, rel, *r.chi_w, std::log(*r.lambda_w), tol.growth_identity);
      });

  add("chi_u independent of base point and radius", "<=", {{r.chi_u_spread.has_value(), "volume growth"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.chi_u_spread, 0.0, tol.growth_spread); });

  add("h >= chi_u", ">=", {{r.h_top.has_value(), "topological entropy"}, {r.chi_u.has_value(), "volume growth"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.h_top, *r.chi_u, tol.h_vs_chi_u); });

  add("h_nu <= sum of positive center exponents + chi_u", "<=",
      {{r.h_nu.has_value(), "measure entropy"}, {r.center_term.has_value(), "lyapunov spectrum"}, {r.chi_u.has_value(), "volume growth"}},
      [&](const char* n, const char* rel) {
        return make_verdict(n, rel, *r.h_nu, *r.center_term + *r.chi_u, tol.refined_margin);
      });

  add("h_nu <= sum of positive exponents", "<=", {{r.h_nu.has_value(), "measure entropy"}, {r.exponents.has_value(), "lyapunov spectrum"}},
      [&](const char* n, const char* rel) {
        double pos = 0.0;
        for (double e : *r.exponents) pos += std::max(e, 0.0);
        return make_verdict(n, rel, *r.h_nu, pos, tol.pesin_ruelle);
      });

  if (r.center_dim == 1) {
    add("h = max(chi_u, chi_s)", "=",
        {{r.h_top.has_value(), "topological entropy"}, {r.chi_u.has_value(), "volume growth"}, {r.chi_s.has_value(), "stable volume growth"}},
        [&](const char* n, const char* rel) {
          return make_verdict(n, rel, *r.h_top, std::max(*r.chi_u, *r.chi_s), tol.max_identity);
        });
  }

  add("sum of exponents = 0", "=", {{r.exponents.has_value(), "lyapunov spectrum"}},
      [&](const char* n, const char* rel) {
        return make_verdict(n, rel, std::accumulate(r.exponents->begin(), r.exponents->end(), 0.0), 0.0, tol.exponent_sum);
      });

  add("spectrum(f^-1) = -reverse(spectrum(f))", "=", {{r.antisymmetry_error.has_value(), "inverse spectrum"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.antisymmetry_error, 0.0, tol.antisymmetry); });

  add("C_n(d alpha) = 0", "=", {{r.closedness_defect.has_value(), "current"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.closedness_defect, 0.0, tol.closedness); });

  add("closedness defect decay rate < bound", "<", {{r.decay_rate.has_value(), "current"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.decay_rate, tol.decay_rate, 0.0); });

  add("limit current class = h_C", "=", {{r.current_class_error.has_value(), "current and homology class"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.current_class_error, 0.0, tol.current_class); });

  add("min J_k / J_{k-1} > 1", ">", {{r.jacobian_min_ratio.has_value(), "jacobian"}},
      [&](const char* n, const char* rel) { return make_verdict(n, rel, *r.jacobian_min_ratio, 1.0, 0.0); });

  return out;
}

bool all_pass(const std::vector<Verdict>& v) {
  for (const auto& x : v)
    if (x.status == VerdictStatus::Fail) return false;
  return true;
}

}  // namespace phlab
