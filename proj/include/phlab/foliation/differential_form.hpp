#pragma once

#include "phlab/core/trig.hpp"
#include "phlab/core/types.hpp"

#include <vector>

namespace phlab {

/// coefficient(x) dx_{i1} ^ ... ^ dx_{ik}, indices strictly increasing.
struct FormTerm {
  TrigPolynomial coefficient;
  std::vector<int> index;
};

/// A k-form on T^n with trigonometric-polynomial coefficients. Degree 0
/// forms are functions and carry a single term with an empty index.
class DifferentialForm {
 public:
  /// Throws std::invalid_argument on unsorted, repeated or out-of-range
  /// indices, or on a term whose length differs from the degree.
  DifferentialForm(int dim, int degree, std::vector<FormTerm> terms);

  static DifferentialForm function(TrigPolynomial f);
  /// dx_{i1} ^ ... ^ dx_{ik} with unit coefficient.
  static DifferentialForm basis(int dim, std::vector<int> index);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::vector<FormTerm>& terms() const { return terms_; }

  /// Value of a 0-form.
  double value(const Vec& x) const;
  /// omega_x(t_1, ..., t_k) for the columns of `tangent` (dim x k).
  double evaluate(const Vec& x, const Mat& tangent) const;

  /// Exact exterior derivative; like terms are merged.
  DifferentialForm exterior_derivative() const;

  /// Bound on the comass: sum over terms of sup |coefficient|.
  double sup_bound() const;

  DifferentialForm operator+(const DifferentialForm& rhs) const;
  DifferentialForm operator*(double s) const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::vector<FormTerm> terms_;
};

}  // namespace phlab
