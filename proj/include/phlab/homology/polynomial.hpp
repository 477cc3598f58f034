#pragma once

#include "phlab/core/integer_matrix.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <vector>

namespace phlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& leading() const { return coeffs_.back(); }

  Polynomial derivative() const;
  Polynomial monic() const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  bool operator==(const Polynomial& rhs) const = default;

  /// Quotient and remainder of Euclidean division.
  static std::pair<Polynomial, Polynomial> divide(const Polynomial& num, const Polynomial& den);
  /// Monic greatest common divisor.
  static Polynomial gcd(Polynomial a, Polynomial b);

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// det(x I - A), computed exactly by the Faddeev-LeVerrier recurrence.
Polynomial characteristic_polynomial(const IntegerMatrix& a);

struct SquarefreeFactor {
  Polynomial factor;  // monic, squarefree
  int multiplicity;
};

/// Yun's algorithm: p = lc * prod factor_i^i with pairwise coprime factors.
std::vector<SquarefreeFactor> squarefree_decomposition(const Polynomial& p);

/// All complex roots of a squarefree polynomial (Aberth-Ehrlich iteration,
/// then Newton polishing in extended precision). Throws ConvergenceError
/// when the iteration does not settle.
std::vector<std::complex<double>> squarefree_roots(const Polynomial& p);

}  // namespace phlab
