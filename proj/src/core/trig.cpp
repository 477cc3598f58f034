#include "phlab/core/trig.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace phlab {

std::string to_string(Phase p) { return p == Phase::Sin ? "sin" : "cos"; }

Phase phase_from_string(const std::string& s) {
  if (s == "sin") return Phase::Sin;
  if (s == "cos") return Phase::Cos;
  throw std::invalid_argument("unknown phase '" + s + "' (expected sin or cos)");
}

double TrigMode::angle(const Vec& x) const {
  double a = 0.0;
  for (std::size_t i = 0; i < frequency.size(); ++i) a += frequency[i] * x[static_cast<Eigen::Index>(i)];
  return kTwoPi * a;
}

double TrigMode::value(const Vec& x) const {
  const double a = angle(x);
  return phase == Phase::Sin ? std::sin(a) : std::cos(a);
}

double TrigMode::angular_derivative(const Vec& x) const {
  const double a = angle(x);
  return phase == Phase::Sin ? std::cos(a) : -std::sin(a);
}

double TrigMode::frequency_norm() const {
  double s = 0.0;
  for (int k : frequency) s += static_cast<double>(k) * k;
  return std::sqrt(s);
}

TrigPolynomial::TrigPolynomial(int dim, double constant, std::vector<Term> terms)
    : dim_(dim), constant_(constant), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (static_cast<int>(t.mode.frequency.size()) != dim_) {
      throw std::invalid_argument("trig polynomial frequency has wrong dimension");
    }
  }
}

TrigPolynomial TrigPolynomial::mode(int dim, double amplitude, std::vector<int> frequency, Phase phase) {
  return TrigPolynomial(dim, 0.0, {Term{amplitude, TrigMode{std::move(frequency), phase}}});
}

double TrigPolynomial::value(const Vec& x) const {
  double v = constant_;
  for (const auto& t : terms_) v += t.amplitude * t.mode.value(x);
  return v;
}

TrigPolynomial TrigPolynomial::partial(int j) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const int k = t.mode.frequency[static_cast<std::size_t>(j)];
    if (k == 0) continue;
    // d/dx_j sin(2 pi k.x) = 2 pi k_j cos(..), d/dx_j cos(..) = -2 pi k_j sin(..)
    const double scale = kTwoPi * k;
    if (t.mode.phase == Phase::Sin) {
      out.push_back({t.amplitude * scale, TrigMode{t.mode.frequency, Phase::Cos}});
    } else {
      out.push_back({-t.amplitude * scale, TrigMode{t.mode.frequency, Phase::Sin}});
    }
  }
  return TrigPolynomial(dim_, 0.0, std::move(out));
}

double TrigPolynomial::sup_bound() const {
  double s = std::abs(constant_);
  for (const auto& t : terms_) s += std::abs(t.amplitude);
  return s;
}

bool TrigPolynomial::is_zero() const {
  if (constant_ != 0.0) return false;
  for (const auto& t : terms_)
    if (t.amplitude != 0.0) return false;
  return true;
}

TrigPolynomial TrigPolynomial::operator+(const TrigPolynomial& rhs) const {
  const int dim = dim_ ? dim_ : rhs.dim_;
  std::vector<Term> terms = terms_;
  terms.insert(terms.end(), rhs.terms_.begin(), rhs.terms_.end());
  return TrigPolynomial(dim, constant_ + rhs.constant_, std::move(terms));
}

TrigPolynomial TrigPolynomial::operator*(double s) const {
  TrigPolynomial out = *this;
  out.constant_ *= s;
  for (auto& t : out.terms_) t.amplitude *= s;
  return out;
}

TrigPerturbation::TrigPerturbation(int dim, std::vector<Term> terms, double amplitude)
    : dim_(dim), terms_(std::move(terms)), amplitude_(amplitude) {
  if (amplitude_ < 0.0 || !std::isfinite(amplitude_)) {
    throw std::invalid_argument("perturbation amplitude must be finite and >= 0");
  }
  for (const auto& t : terms_) {
    if (t.coefficient.size() != dim_ || static_cast<int>(t.mode.frequency.size()) != dim_) {
      throw std::invalid_argument("perturbation term has wrong dimension");
    }
  }
}

Vec TrigPerturbation::value(const Vec& x) const {
  Vec v = Vec::Zero(dim_);
  if (amplitude_ == 0.0) return v;
  for (const auto& t : terms_) v += t.mode.value(x) * t.coefficient;
  return amplitude_ * v;
}

Mat TrigPerturbation::jacobian(const Vec& x) const {
  Mat j = Mat::Zero(dim_, dim_);
  if (amplitude_ == 0.0) return j;
  for (const auto& t : terms_) {
    const double d = kTwoPi * t.mode.angular_derivative(x);
    for (int c = 0; c < dim_; ++c) {
      const int k = t.mode.frequency[static_cast<std::size_t>(c)];
      if (k != 0) j.col(c) += (d * k) * t.coefficient;
    }
  }
  return amplitude_ * j;
}

double TrigPerturbation::lipschitz_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coefficient.norm() * kTwoPi * t.mode.frequency_norm();
  return amplitude_ * s;
}

TrigPerturbation TrigPerturbation::with_amplitude(double s) const {
  return TrigPerturbation(dim_, terms_, s);
}

}  // namespace phlab
