#include "phlab/core/toral_diffeo.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace phlab {
namespace {

Mat to_mat(const IntegerMatrix& m) {
  Mat out(m.size(), m.size());
  for (int r = 0; r < m.size(); ++r)
    for (int c = 0; c < m.size(); ++c) out(r, c) = static_cast<double>(m(r, c));
  return out;
}

}  // namespace

ToralDiffeo::ToralDiffeo(IntegerMatrix linear, TrigPerturbation perturbation)
    : forward_(std::move(linear)),
      backward_(forward_.inverse()),
      forward_real_(to_mat(forward_)),
      backward_real_(to_mat(backward_)),
      perturbation_(std::move(perturbation)) {
  if (forward_.size() > kMaxDim) {
    throw std::invalid_argument("toral maps are limited to dimension " + std::to_string(kMaxDim));
  }
  if (perturbation_.dim() != forward_.size()) {
    throw std::invalid_argument("perturbation dimension does not match the matrix");
  }
  const double inv_norm = Eigen::JacobiSVD<Mat>(backward_real_).singularValues()(0);
  contraction_ = inv_norm * perturbation_.lipschitz_bound();
  if (!(contraction_ < 1.0)) {
    std::ostringstream os;
    os << "perturbation too large for a diffeomorphism: ||A^-1|| * Lip(p) = " << contraction_
       << " >= 1";
    throw std::invalid_argument(os.str());
  }
}

ToralDiffeo::ToralDiffeo(IntegerMatrix linear)
    : ToralDiffeo(linear, TrigPerturbation::none(linear.size())) {}

ToralDiffeo ToralDiffeo::inverse() const {
  ToralDiffeo out = *this;
  out.reversed_ = !reversed_;
  return out;
}

Vec ToralDiffeo::forward_lift(const Vec& x) const {
  Vec y = forward_real_ * x;
  if (!perturbation_.is_zero()) y += perturbation_.value(x);
  return y;
}

Vec ToralDiffeo::backward_lift(const Vec& y) const {
  Vec x = backward_real_ * y;
  if (perturbation_.is_zero()) return x;
  // x_{k+1} = A^{-1} (y - p(x_k)); contraction rate q < 1.
  for (int it = 0; it < kInverseIterationBudget; ++it) {
    Vec next = backward_real_ * (y - perturbation_.value(x));
    const double step = (next - x).lpNorm<Eigen::Infinity>();
    x = next;
    if (step <= 1e-15 * (1.0 + x.lpNorm<Eigen::Infinity>())) return x;
  }
  std::ostringstream os;
  os << "inverse iteration did not converge in " << kInverseIterationBudget
     << " steps (contraction factor " << contraction_ << ")";
  throw ConvergenceError(os.str());
}

Mat ToralDiffeo::forward_differential(const Vec& x) const {
  if (perturbation_.is_zero()) return forward_real_;
  return forward_real_ + perturbation_.jacobian(x);
}

Vec ToralDiffeo::apply_lift(const Vec& x) const {
  return reversed_ ? backward_lift(x) : forward_lift(x);
}

TorusPoint ToralDiffeo::apply(const TorusPoint& x) const { return TorusPoint(apply_lift(x.coords())); }

Mat ToralDiffeo::differential(const Vec& x) const {
  if (!reversed_) return forward_differential(x);
  if (perturbation_.is_zero()) return backward_real_;
  // D(f^{-1})(y) = (Df(f^{-1} y))^{-1}
  return forward_differential(backward_lift(x)).inverse();
}

Vec ToralDiffeo::invert_lift(const Vec& y) const {
  return reversed_ ? forward_lift(y) : backward_lift(y);
}

TorusPoint ToralDiffeo::invert(const TorusPoint& y) const { return TorusPoint(invert_lift(y.coords())); }

}  // namespace phlab
