#pragma once

#include <span>

namespace phlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. r_squared is 1 when y is
/// constant and the fit is exact. Requires at least two points.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace phlab
