#pragma once

#include "phlab/homology/exterior.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace phlab {

struct SpectrumReport {
  /// With multiplicity, sorted by modulus (descending), then real part, then
  /// imaginary part (both descending).
  std::vector<std::complex<double>> eigenvalues;
  std::vector<int> multiplicities;  // parallel to eigenvalues
  double dominant_modulus = 0.0;
  /// True iff exactly one eigenvalue (counted with multiplicity) attains the
  /// largest modulus.
  bool dominant_simple = false;
};

/// Eigenvalues from the exact characteristic polynomial: square-free
/// factorisation, root finding per factor, then inverse-iteration refinement
/// of each simple eigenvalue against the matrix itself.
SpectrumReport spectrum(const IntegerMatrix& m);
SpectrumReport spectrum(const HomologyAction& h);

struct TopologicalGrowth {
  double lambda_w;  // dominant eigenvalue modulus of Lambda^k A
  bool unique;      // dominant eigenvalue of Lambda^k A is simple
};

/// lambda_W for a k-dimensional unstable bundle of A: the dominant modulus
/// of Lambda^k A, i.e. the product of the k largest eigenvalue moduli.
/// Throws PreconditionError (naming the moduli) unless the k largest moduli
/// all exceed 1 and are separated from the rest.
TopologicalGrowth topological_growth(const IntegerMatrix& a, int k);

struct HomologyClass {
  Eigen::VectorXd coords;  // unit norm, first nonzero coordinate positive
  int degree = 0;
  double eigenvalue = 0.0;
  double residual = 0.0;   // |M v - lambda v|
};

/// The class h_C carried by the k-dimensional unstable foliation of the linear
/// model: the dominant eigenvector of Lambda^k A. Throws PreconditionError
/// when topological_growth fails or the dominant eigenvalue is not simple.
HomologyClass unstable_homology_class(const IntegerMatrix& a, int k);

/// |matrix * v - lambda * v| / |v|. Throws std::invalid_argument on a degree
/// mismatch.
double check_eigen_relation(const HomologyAction& h, const HomologyClass& v, double lambda);

/// Sign convention shared by every reported direction: first coordinate with
/// |c| > tol made positive.
Eigen::VectorXd canonical_sign(Eigen::VectorXd v, double tol = 1e-12);

}  // namespace phlab
