#include "phlab/foliation/differential_form.hpp"

#include <algorithm>
#include <stdexcept>

namespace phlab {

DifferentialForm::DifferentialForm(int dim, int degree, std::vector<FormTerm> terms)
    : dim_(dim), degree_(degree), terms_(std::move(terms)) {
  if (degree < 0 || degree > dim) throw std::invalid_argument("form degree must lie in [0, dim]");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.index.size()) != degree) throw std::invalid_argument("form term length differs from degree");
    if (t.coefficient.dim() != dim) throw std::invalid_argument("form coefficient dimension mismatch");
    for (std::size_t i = 0; i < t.index.size(); ++i) {
      if (t.index[i] < 0 || t.index[i] >= dim) throw std::invalid_argument("form index out of range");
      if (i > 0 && t.index[i] <= t.index[i - 1]) throw std::invalid_argument("form indices must be strictly increasing");
    }
  }
}

DifferentialForm DifferentialForm::function(TrigPolynomial f) {
  const int dim = f.dim();
  return DifferentialForm(dim, 0, {{std::move(f), {}}});
}

DifferentialForm DifferentialForm::basis(int dim, std::vector<int> index) {
  const int k = static_cast<int>(index.size());
  return DifferentialForm(dim, k, {{TrigPolynomial::constant(dim, 1.0), std::move(index)}});
}

double DifferentialForm::value(const Vec& x) const {
  if (degree_ != 0) throw std::invalid_argument("value() needs a 0-form");
  double s = 0.0;
  for (const auto& t : terms_) s += t.coefficient.value(x);
  return s;
}

double DifferentialForm::evaluate(const Vec& x, const Mat& tangent) const {
  if (tangent.cols() != degree_ || tangent.rows() != dim_) throw std::invalid_argument("tangent frame shape mismatch");
  double s = 0.0;
  for (const auto& t : terms_) {
    double minor = 1.0;
    if (degree_ == 1) {
      minor = tangent(t.index[0], 0);
    } else if (degree_ == 2) {
      const int i = t.index[0], j = t.index[1];
      minor = tangent(i, 0) * tangent(j, 1) - tangent(j, 0) * tangent(i, 1);
    } else if (degree_ > 2) {
      Mat sub(degree_, degree_);
      for (int r = 0; r < degree_; ++r) sub.row(r) = tangent.row(t.index[static_cast<std::size_t>(r)]);
      minor = sub.determinant();
    }
    s += t.coefficient.value(x) * minor;
  }
  return s;
}

DifferentialForm DifferentialForm::exterior_derivative() const {
  if (degree_ >= dim_) return DifferentialForm(dim_, std::min(degree_ + 1, dim_), {});
  std::vector<FormTerm> out;
  auto add = [&out](std::vector<int> idx, const TrigPolynomial& c) {
    for (auto& t : out) {
      if (t.index == idx) {
        t.coefficient = t.coefficient + c;
        return;
      }
    }
    out.push_back({c, std::move(idx)});
  };
  for (const auto& t : terms_) {
    for (int j = 0; j < dim_; ++j) {
      if (std::find(t.index.begin(), t.index.end(), j) != t.index.end()) continue;
      // dx_j ^ dx_I: moving dx_j into sorted position past p factors gives (-1)^p.
      const auto pos = std::lower_bound(t.index.begin(), t.index.end(), j) - t.index.begin();
      std::vector<int> idx = t.index;
      idx.insert(idx.begin() + pos, j);
      const double sign = pos % 2 == 0 ? 1.0 : -1.0;
      add(std::move(idx), t.coefficient.partial(j) * sign);
    }
  }
  std::erase_if(out, [](const FormTerm& t) { return t.coefficient.is_zero(); });
  return DifferentialForm(dim_, degree_ + 1, std::move(out));
}

double DifferentialForm::sup_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coefficient.sup_bound();
  return s;
}

DifferentialForm DifferentialForm::operator+(const DifferentialForm& rhs) const {
  if (rhs.dim_ != dim_ || rhs.degree_ != degree_) throw std::invalid_argument("adding forms of different shape");
  std::vector<FormTerm> t = terms_;
  t.insert(t.end(), rhs.terms_.begin(), rhs.terms_.end());
  return DifferentialForm(dim_, degree_, std::move(t));
}

DifferentialForm DifferentialForm::operator*(double s) const {
  std::vector<FormTerm> t = terms_;
  for (auto& term : t) term.coefficient = term.coefficient * s;
  return DifferentialForm(dim_, degree_, std::move(t));
}

}  // namespace phlab
