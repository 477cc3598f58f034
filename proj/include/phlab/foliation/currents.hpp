#pragma once

#include "phlab/foliation/differential_form.hpp"
#include "phlab/foliation/poly_patch.hpp"
#include "phlab/foliation/volume_growth.hpp"

#include <vector>

namespace phlab {

/// C_n(omega) = (1 / Vol) * integral of omega over the patch.
struct CurrentSample {
  int n = 0;
  double value = 0.0;
  double volume = 0.0;
};

/// Oriented integral of a k-form over a k-patch: 3-point Gauss on every
/// chord, the edge-midpoint rule on every triangle.
double integrate(const PolyPatch& patch, const DifferentialForm& omega);

/// Integral of a (k-1)-form over the oriented boundary: endpoint difference
/// for a polyline, 3-point Gauss line integral along the boundary edges of a mesh.
double boundary_integral(const PolyPatch& patch, const DifferentialForm& alpha);

CurrentSample evaluate_current(const PolyPatch& patch, const DifferentialForm& omega, int n = 0);

/// (C(dx_I))_I over lexicographic k-subsets I, normalized to unit length
/// with the first significant entry positive.
Eigen::VectorXd empirical_class(const PolyPatch& patch);

struct DefectSample {
  int n = 0;
  double defect = 0.0;  // boundary term / volume
  double stokes = 0.0;  // C_n(d alpha) by interior quadrature, for cross-checking
  double volume = 0.0;
};

/// |d_n| <= constant * rho^n, fitted on the log of the tail maximum
/// max_{m >= n} |d_m|; constant = max_n |d_n| rho^{-n}.
struct DecayFit {
  double rho = 0.0;
  double constant = 0.0;
};

/// Closedness defects C_n(d alpha) of f^n W_r(x) for n = 0..n_max.
std::vector<DefectSample> closedness_defects(const ToralDiffeo& map, const TorusPoint& x, double r,
                                             const DifferentialForm& alpha, int n_max, const GrowthOptions& opts = {});

/// Defect at a single n.
double closedness_defect(const ToralDiffeo& map, const TorusPoint& x, double r, int n, const DifferentialForm& alpha,
                         const GrowthOptions& opts = {});

DecayFit fit_defect_decay(const std::vector<DefectSample>& samples);

}  // namespace phlab
