#pragma once

#include "phlab/core/integer_matrix.hpp"
#include "phlab/core/torus.hpp"
#include "phlab/core/trig.hpp"
#include "phlab/core/types.hpp"

namespace phlab {

/// f(x) = A x + p(x) mod Z^n, with A unimodular and p a trigonometric
/// perturbation small enough that f is a diffeomorphism homotopic to T_A.
///
/// A ToralDiffeo may also represent the inverse f^{-1} of such a map
/// (see inverse()); all operations then act with f^{-1}, and linear_part()
/// returns A^{-1}.
class ToralDiffeo {
 public:
  /// Throws std::invalid_argument when dimensions disagree or the
  /// contraction certificate ||A^{-1}|| * Lip(p) < 1 fails.
  ToralDiffeo(IntegerMatrix linear, TrigPerturbation perturbation);
  explicit ToralDiffeo(IntegerMatrix linear);

  int dim() const { return forward_.size(); }

  /// Integer matrix of the homotopy class of this map.
  const IntegerMatrix& linear_part() const { return reversed_ ? backward_ : forward_; }
  const TrigPerturbation& perturbation() const { return perturbation_; }
  bool is_reversed() const { return reversed_; }
  bool is_linear() const { return perturbation_.is_zero(); }

  /// q = ||A^{-1}||_2 * Lip(p); the inverse iteration contracts at this rate.
  double contraction_factor() const { return contraction_; }

  ToralDiffeo inverse() const;

  /// The map on a lift: x in R^n to a point of R^n covering f(x mod Z^n).
  Vec apply_lift(const Vec& x) const;
  TorusPoint apply(const TorusPoint& x) const;

  /// Exact Jacobian at x (any lift of x).
  Mat differential(const Vec& x) const;
  Mat differential(const TorusPoint& x) const { return differential(x.coords()); }

  /// Inverse on a lift: returns x with apply_lift(x) = y.
  /// Throws ConvergenceError when the fixed-point iteration exhausts its budget.
  Vec invert_lift(const Vec& y) const;
  TorusPoint invert(const TorusPoint& y) const;

  static constexpr int kInverseIterationBudget = 200;

 private:
  Vec forward_lift(const Vec& x) const;
  Vec backward_lift(const Vec& y) const;
  Mat forward_differential(const Vec& x) const;

  IntegerMatrix forward_;
  IntegerMatrix backward_;
  Mat forward_real_;
  Mat backward_real_;
  TrigPerturbation perturbation_;
  double contraction_ = 0.0;
  bool reversed_ = false;
};

}  // namespace phlab
