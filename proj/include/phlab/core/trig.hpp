#pragma once

#include "phlab/core/types.hpp"

#include <string>
#include <vector>

namespace phlab {

enum class Phase { Sin, Cos };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

/// One Fourier mode: sin or cos of 2*pi*<frequency, x>.
struct TrigMode {
  std::vector<int> frequency;
  Phase phase = Phase::Sin;

  double angle(const Vec& x) const;
  double value(const Vec& x) const;
  /// Derivative of the mode with respect to its angle (sin -> cos, cos -> -sin).
  double angular_derivative(const Vec& x) const;
  /// Euclidean norm of the frequency vector.
  double frequency_norm() const;
};

/// Real scalar trigonometric polynomial on T^n:
/// constant + sum_j amplitude_j * mode_j(x).
class TrigPolynomial {
 public:
  struct Term {
    double amplitude = 0.0;
    TrigMode mode;
  };

  TrigPolynomial() = default;
  TrigPolynomial(int dim, double constant, std::vector<Term> terms = {});

  static TrigPolynomial constant(int dim, double c) { return TrigPolynomial(dim, c); }
  static TrigPolynomial mode(int dim, double amplitude, std::vector<int> frequency, Phase phase);

  int dim() const { return dim_; }
  double constant_term() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }

  double value(const Vec& x) const;
  /// Exact partial derivative with respect to coordinate j.
  TrigPolynomial partial(int j) const;
  /// Upper bound on sup |value|: |constant| + sum |amplitude|.
  double sup_bound() const;
  bool is_zero() const;

  TrigPolynomial operator+(const TrigPolynomial& rhs) const;
  TrigPolynomial operator*(double s) const;

 private:
  int dim_ = 0;
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

/// Vector-valued perturbation p(x) = amplitude * sum_j coefficient_j * mode_j(x),
/// Z^n-periodic by construction.
class TrigPerturbation {
 public:
  struct Term {
    Vec coefficient;
    TrigMode mode;
  };

  TrigPerturbation() = default;
  TrigPerturbation(int dim, std::vector<Term> terms, double amplitude);

  static TrigPerturbation none(int dim) { return TrigPerturbation(dim, {}, 0.0); }

  int dim() const { return dim_; }
  double amplitude() const { return amplitude_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return amplitude_ == 0.0 || terms_.empty(); }

  Vec value(const Vec& x) const;
  /// Exact Jacobian Dp(x).
  Mat jacobian(const Vec& x) const;
  /// Lipschitz bound: amplitude * sum |coefficient| * 2*pi*|frequency|.
  double lipschitz_bound() const;

  TrigPerturbation with_amplitude(double s) const;

 private:
  int dim_ = 0;
  std::vector<Term> terms_;
  double amplitude_ = 0.0;
};

}  // namespace phlab
