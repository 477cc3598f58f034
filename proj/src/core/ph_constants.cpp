#include "phlab/core/ph_constants.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace phlab {

PHConstants::PHConstants(double lambda_s, double lambda_c_lo, double lambda_c_hi, double lambda_u,
                         double c1)
    : lambda_s_(lambda_s), lambda_c_lo_(lambda_c_lo), lambda_c_hi_(lambda_c_hi), lambda_u_(lambda_u), c1_(c1) {
  const bool ok = 0.0 < lambda_s && lambda_s < lambda_c_lo && lambda_c_lo <= 1.0 && 1.0 <= lambda_c_hi &&
                  lambda_c_hi < lambda_u && c1 >= 1.0 && std::isfinite(lambda_u) && std::isfinite(c1);
  if (!ok) {
    std::ostringstream os;
    os << "partial hyperbolicity constants violate 0 < ls < lc' <= 1 <= lc'' < lu, c1 >= 1: (" << lambda_s
       << ", " << lambda_c_lo << ", " << lambda_c_hi << ", " << lambda_u << ", c1=" << c1 << ")";
    throw std::invalid_argument(os.str());
  }
}

PHConstants PHConstants::from_linear(const IntegerMatrix& a, double slack) {
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(a.to_real(), false).eigenvalues();
  std::vector<double> moduli;
  for (Eigen::Index i = 0; i < ev.size(); ++i) moduli.push_back(std::abs(ev[i]));
  double s = 0.0, u = std::numeric_limits<double>::infinity();
  double clo = 1.0, chi = 1.0;
  constexpr double kUnit = 1e-9;
  for (double m : moduli) {
    if (m < 1.0 - kUnit) s = std::max(s, m);
    else if (m > 1.0 + kUnit) u = std::min(u, m);
    else {
      clo = std::min(clo, m);
      chi = std::max(chi, m);
    }
  }
  if (s == 0.0 || !std::isfinite(u)) {
    throw std::invalid_argument("linear model has no stable or no unstable eigenvalue: " + a.to_string());
  }
  const double grow = 1.0 + slack;
  return PHConstants(s * grow, std::min(clo / grow, 1.0), std::max(chi * grow, 1.0), u / grow, 1.0);
}

}  // namespace phlab
