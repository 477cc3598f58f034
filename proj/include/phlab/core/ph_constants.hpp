#pragma once

#include "phlab/core/integer_matrix.hpp"

namespace phlab {

/// Rates of a partially hyperbolic splitting E^s + E^c + E^u:
///   |df^i v| <= c1 lambda_s^i |v|            on E^s
///   c1^-1 lambda_c_lo^i |v| <= |df^i v| <= c1 lambda_c_hi^i |v|   on E^c
///   |df^i v| >= c1^-1 lambda_u^i |v|         on E^u
/// with 0 < lambda_s < lambda_c_lo <= 1 <= lambda_c_hi < lambda_u.
class PHConstants {
 public:
  /// Throws std::invalid_argument if the ordering chain or c1 >= 1 fails.
  PHConstants(double lambda_s, double lambda_c_lo, double lambda_c_hi, double lambda_u, double c1 = 1.0);

  /// Rates read off the eigenvalue moduli of a linear model, widened by
  /// `slack` (multiplicatively) so nearby perturbations still fit.
  static PHConstants from_linear(const IntegerMatrix& a, double slack = 0.0);

  double lambda_s() const { return lambda_s_; }
  double lambda_c_lo() const { return lambda_c_lo_; }
  double lambda_c_hi() const { return lambda_c_hi_; }
  double lambda_u() const { return lambda_u_; }
  double c1() const { return c1_; }

 private:
  double lambda_s_, lambda_c_lo_, lambda_c_hi_, lambda_u_, c1_;
};

}  // namespace phlab
