#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace phlab {

/// Largest torus dimension handled by the map kernels.
inline constexpr int kMaxDim = 4;

// Small fixed-capacity vectors and matrices; no heap traffic in the inner loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// An iteration ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A resource budget (vertex count, sample size) was exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inputs do not satisfy an operation's precondition.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phlab
