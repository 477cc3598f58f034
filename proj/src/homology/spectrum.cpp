#include "phlab/homology/spectrum.hpp"

#include "phlab/core/types.hpp"
#include "phlab/homology/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phlab {
namespace {

using cd = std::complex<double>;

constexpr double kModulusTol = 1e-9;

bool same_modulus(double a, double b) { return std::abs(a - b) <= kModulusTol * std::max(1.0, std::max(a, b)); }

struct Eigenpair {
  cd value;
  Eigen::VectorXcd vector;
  double residual;
};

// Inverse iteration with a shift next to mu; the Rayleigh quotient replaces
// mu only when it lowers the residual.
Eigenpair inverse_iteration(const Eigen::MatrixXcd& m, cd mu) {
  const Eigen::Index n = m.rows();
  const cd shift = mu + cd(1e-10 * std::max(1.0, std::abs(mu)), 0.0);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m - shift * Eigen::MatrixXcd::Identity(n, n));
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] += cd(0.01 * static_cast<double>(i + 1), 0.0);
  v.normalize();
  for (int it = 0; it < 6; ++it) {
    Eigen::VectorXcd w = lu.solve(v);
    const double nw = w.norm();
    if (!std::isfinite(nw) || nw == 0.0) break;
    v = w / nw;
  }
  const Eigen::VectorXcd mv = m * v;
  const double r_old = (mv - mu * v).norm();
  const cd rq = v.dot(mv);  // v^H M v with |v| = 1
  const double r_new = (mv - rq * v).norm();
  if (r_new < r_old) return {rq, v, r_new};
  return {mu, v, r_old};
}

void sort_spectrum(std::vector<cd>& vals, std::vector<int>& mult) {
  std::vector<std::size_t> idx(vals.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(vals[a]) > std::abs(vals[b]);
  });
  // Within a group of equal moduli order by real, then imaginary part.
  for (std::size_t g = 0; g < idx.size();) {
    std::size_t e = g + 1;
    while (e < idx.size() && same_modulus(std::abs(vals[idx[g]]), std::abs(vals[idx[e]]))) ++e;
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(g), idx.begin() + static_cast<std::ptrdiff_t>(e),
                     [&](std::size_t a, std::size_t b) {
                       if (vals[a].real() != vals[b].real()) return vals[a].real() > vals[b].real();
                       return vals[a].imag() > vals[b].imag();
                     });
    g = e;
  }
  std::vector<cd> v2;
  std::vector<int> m2;
  for (std::size_t i : idx) {
    v2.push_back(vals[i]);
    m2.push_back(mult[i]);
  }
  vals = std::move(v2);
  mult = std::move(m2);
}

}  // namespace

Eigen::VectorXd canonical_sign(Eigen::VectorXd v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tol) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return v;
}

SpectrumReport spectrum(const IntegerMatrix& m) {
  const Polynomial chi = characteristic_polynomial(m);
  const Eigen::MatrixXcd mc = m.to_real().cast<cd>();
  std::vector<cd> distinct;
  std::vector<int> mult;
  for (const auto& f : squarefree_decomposition(chi)) {
    for (cd z : squarefree_roots(f.factor)) {
      if (std::abs(z.imag()) <= 1e-14 * (1.0 + std::abs(z))) z = cd(z.real(), 0.0);
      if (f.multiplicity == 1) {
        cd refined = inverse_iteration(mc, z).value;
        if (z.imag() == 0.0) refined = cd(refined.real(), 0.0);
        z = refined;
      }
      distinct.push_back(z);
      mult.push_back(f.multiplicity);
    }
  }
  sort_spectrum(distinct, mult);

  SpectrumReport out;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (int k = 0; k < mult[i]; ++k) {
      out.eigenvalues.push_back(distinct[i]);
      out.multiplicities.push_back(mult[i]);
    }
  }
  if (!out.eigenvalues.empty()) {
    out.dominant_modulus = std::abs(out.eigenvalues.front());
    int top = 0;
    for (const auto& z : out.eigenvalues)
      if (same_modulus(std::abs(z), out.dominant_modulus)) ++top;
    out.dominant_simple = top == 1;
  }
  return out;
}

SpectrumReport spectrum(const HomologyAction& h) { return spectrum(h.matrix); }

TopologicalGrowth topological_growth(const IntegerMatrix& a, int k) {
  const int n = a.size();
  if (k < 1 || k > n) throw std::invalid_argument("unstable dimension k must satisfy 1 <= k <= n");
  const SpectrumReport base = spectrum(a);
  std::vector<double> moduli;
  for (const auto& z : base.eigenvalues) moduli.push_back(std::abs(z));
  const bool expanding = moduli[static_cast<std::size_t>(k - 1)] > 1.0 + kModulusTol;
  const bool separated =
      k == n || !same_modulus(moduli[static_cast<std::size_t>(k - 1)], moduli[static_cast<std::size_t>(k)]);
  if (!expanding || !separated) {
    std::ostringstream os;
    os << "no " << k << "-dimensional unstable bundle: eigenvalue moduli are (";
    for (std::size_t i = 0; i < moduli.size(); ++i) os << (i ? ", " : "") << moduli[i];
    os << ")" << (!expanding ? "; the k-th largest is not > 1" : "; the k-th and (k+1)-th coincide");
    throw PreconditionError(os.str());
  }
  const SpectrumReport lifted = spectrum(exterior_power(a, k));
  return {lifted.dominant_modulus, lifted.dominant_simple};
}

HomologyClass unstable_homology_class(const IntegerMatrix& a, int k) {
  const TopologicalGrowth g = topological_growth(a, k);
  if (!g.unique) {
    throw PreconditionError("dominant eigenvalue of the exterior power is not simple; no unique carried class");
  }
  const HomologyAction h = exterior_power(a, k);
  const SpectrumReport s = spectrum(h);
  const cd lead = s.eigenvalues.front();
  const Eigen::MatrixXcd mc = h.matrix.to_real().cast<cd>();
  const Eigenpair pair = inverse_iteration(mc, cd(lead.real(), 0.0));

  // A simple real eigenvalue has a real eigenvector; rotate away the phase.
  Eigen::Index big = 0;
  pair.vector.cwiseAbs().maxCoeff(&big);
  const cd phase = std::conj(pair.vector[big]) / std::abs(pair.vector[big]);
  Eigen::VectorXd v = (pair.vector * phase).real();
  v.normalize();

  HomologyClass out;
  out.coords = canonical_sign(v);
  out.degree = k;
  out.eigenvalue = lead.real();
  const Eigen::MatrixXd mr = h.matrix.to_real();
  out.residual = (mr * out.coords - out.eigenvalue * out.coords).norm();
  return out;
}

double check_eigen_relation(const HomologyAction& h, const HomologyClass& v, double lambda) {
  if (h.degree != v.degree || v.coords.size() != h.matrix.size()) {
    throw std::invalid_argument("homology class degree does not match the action");
  }
  const Eigen::MatrixXd m = h.matrix.to_real();
  const Eigen::VectorXd mv = m * v.coords;
  const double nv = v.coords.norm();
  return std::min((mv - lambda * v.coords).norm(), (mv + lambda * v.coords).norm()) / nv;
}

}  // namespace phlab
