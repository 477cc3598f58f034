#include "phlab/homology/polynomial.hpp"

#include "phlab/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace phlab {
namespace {

using cld = std::complex<long double>;

long double to_ld(const Rational& r) { return static_cast<long double>(r); }

// Value and derivative by Horner's rule.
std::pair<cld, cld> horner(const std::vector<cld>& c, cld z) {
  cld p = c.back(), dp = 0.0L;
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    dp = dp * z + p;
    p = p * z + c[static_cast<std::size_t>(i)];
  }
  return {p, dp};
}

}  // namespace

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long>(i));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return *this;
  std::vector<Rational> c = coeffs_;
  const Rational lc = leading();
  for (auto& x : c) x /= lc;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  std::vector<Rational> c(std::max(coeffs_.size(), rhs.coeffs_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] -= rhs.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial();
  std::vector<Rational> c(coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divide(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = num.coeffs_;
  if (num.degree() < den.degree()) return {Polynomial(), num};
  std::vector<Rational> quot(static_cast<std::size_t>(num.degree() - den.degree() + 1));
  for (int i = num.degree() - den.degree(); i >= 0; --i) {
    const Rational q = rem[static_cast<std::size_t>(i + den.degree())] / den.leading();
    quot[static_cast<std::size_t>(i)] = q;
    for (int j = 0; j <= den.degree(); ++j) rem[static_cast<std::size_t>(i + j)] -= q * den.coeffs_[static_cast<std::size_t>(j)];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divide(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial characteristic_polynomial(const IntegerMatrix& a) {
  const int n = a.size();
  using BigMat = std::vector<BigInt>;
  auto at = [n](BigMat& m, int r, int c) -> BigInt& { return m[static_cast<std::size_t>(r * n + c)]; };

  // c[n] = 1; M_k = A M_{k-1} + c[n-k+1] I; c[n-k] = -tr(A M_k) / k.
  std::vector<BigInt> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1;
  BigMat m(static_cast<std::size_t>(n * n), 0);
  for (int k = 1; k <= n; ++k) {
    BigMat next(static_cast<std::size_t>(n * n), 0);
    for (int r = 0; r < n; ++r) {
      for (int col = 0; col < n; ++col) {
        BigInt s = 0;
        for (int j = 0; j < n; ++j) s += BigInt(a(r, j)) * at(m, j, col);
        at(next, r, col) = s;
      }
      at(next, r, r) += c[static_cast<std::size_t>(n - k + 1)];
    }
    m = std::move(next);
    BigInt trace = 0;
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j) trace += BigInt(a(r, j)) * at(m, j, r);
    if (trace % k != 0) throw std::logic_error("Faddeev-LeVerrier produced a non-integer coefficient");
    c[static_cast<std::size_t>(n - k)] = -trace / k;
  }
  std::vector<Rational> rc;
  for (const auto& x : c) rc.emplace_back(x);
  return Polynomial(std::move(rc));
}

std::vector<SquarefreeFactor> squarefree_decomposition(const Polynomial& p) {
  std::vector<SquarefreeFactor> out;
  if (p.degree() < 1) return out;
  const Polynomial f = p.monic();
  const Polynomial df = f.derivative();
  const Polynomial a0 = Polynomial::gcd(f, df);
  Polynomial b = Polynomial::divide(f, a0).first;
  Polynomial c = Polynomial::divide(df, a0).first;
  Polynomial d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    const Polynomial a = Polynomial::gcd(b, d);
    if (a.degree() > 0) out.push_back({a, i});
    b = Polynomial::divide(b, a).first;
    c = Polynomial::divide(d, a).first;
    d = c - b.derivative();
  }
  return out;
}

std::vector<std::complex<double>> squarefree_roots(const Polynomial& p) {
  const int n = p.degree();
  std::vector<std::complex<double>> out;
  if (n < 1) return out;
  std::vector<cld> c;
  const Polynomial m = p.monic();
  for (const auto& x : m.coeffs()) c.emplace_back(to_ld(x), 0.0L);
  if (n == 1) {
    out.emplace_back(static_cast<double>(-c[0].real()), 0.0);
    return out;
  }

  // Cauchy bound on root moduli for the starting circle.
  long double bound = 0.0L;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[static_cast<std::size_t>(i)]));
  const long double radius = std::min(1.0L + bound, 1e6L);
  std::vector<cld> z(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const long double th = 2.0L * 3.14159265358979323846L * j / n + 0.4L;
    z[static_cast<std::size_t>(j)] = std::polar(radius * 0.5L, th);
  }

  constexpr int kMaxIter = 2000;
  bool converged = false;
  for (int it = 0; it < kMaxIter && !converged; ++it) {
    long double worst = 0.0L;
    for (int j = 0; j < n; ++j) {
      auto& zj = z[static_cast<std::size_t>(j)];
      const auto [pv, dpv] = horner(c, zj);
      if (pv == 0.0L) continue;
      const cld ratio = pv / dpv;
      cld repulsion = 0.0L;
      for (int k = 0; k < n; ++k)
        if (k != j) repulsion += 1.0L / (zj - z[static_cast<std::size_t>(k)]);
      const cld step = ratio / (1.0L - ratio * repulsion);
      zj -= step;
      worst = std::max(worst, std::abs(step) / (1.0L + std::abs(zj)));
    }
    converged = worst < 1e-17L;
  }
  if (!converged) {
    throw ConvergenceError("polynomial root finder did not converge for a degree-" + std::to_string(n) +
                           " factor");
  }
  for (auto& zj : z) {
    for (int k = 0; k < 3; ++k) {
      const auto [pv, dpv] = horner(c, zj);
      if (dpv == 0.0L) break;
      zj -= pv / dpv;
    }
    out.emplace_back(static_cast<double>(zj.real()), static_cast<double>(zj.imag()));
  }
  return out;
}

}  // namespace phlab
