#pragma once

#include "phlab/lab/scenario.hpp"

#include <string>
#include <vector>

namespace phlab {

/// Named example scenarios: cat2, ph3, ph3-perturbed-0.01, ph3-perturbed-0.02,
/// t4-product and skew-suspension-{0, plus0.005, minus0.005}.
std::vector<Scenario> builtin_catalog();

/// Throws ScenarioError for an unknown name.
Scenario find_builtin(const std::string& name);

}  // namespace phlab
