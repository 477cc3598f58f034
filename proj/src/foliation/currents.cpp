#include "phlab/foliation/currents.hpp"

#include "phlab/core/fit.hpp"
#include "phlab/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phlab {
namespace {

constexpr double kGaussNode = 0.38729833462074168852;  // sqrt(3/5) / 2
constexpr double kGaussT[3] = {0.5 - kGaussNode, 0.5, 0.5 + kGaussNode};
constexpr double kGaussW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

double chord_integral(const DifferentialForm& w, const Vec& a, const Vec& b) {
  const Mat d = b - a;
  double s = 0.0;
  for (int g = 0; g < 3; ++g) s += kGaussW[g] * w.evaluate(a + kGaussT[g] * (b - a), d);
  return s;
}

double triangle_integral(const DifferentialForm& w, const Vec& a, const Vec& b, const Vec& c) {
  Mat t(a.size(), 2);
  t.col(0) = b - a;
  t.col(1) = c - a;
  const double s = w.evaluate(0.5 * (a + b), t) + w.evaluate(0.5 * (b + c), t) + w.evaluate(0.5 * (c + a), t);
  return s / 6.0;
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

double integrate(const PolyPatch& patch, const DifferentialForm& omega) {
  if (omega.degree() != patch.degree() || omega.dim() != patch.dim())
    throw std::invalid_argument("form degree must match the patch dimension");
  const auto& v = patch.vertices();
  if (patch.degree() == 1) {
    return parallel_sum(v.size() - 1, [&](std::size_t b, std::size_t e) {
      double s = 0.0;
      for (std::size_t i = b; i < e; ++i) s += chord_integral(omega, v[i], v[i + 1]);
      return s;
    });
  }
  const auto& t = patch.triangles();
  return parallel_sum(t.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i)
      s += triangle_integral(omega, v[static_cast<std::size_t>(t[i][0])], v[static_cast<std::size_t>(t[i][1])],
                             v[static_cast<std::size_t>(t[i][2])]);
    return s;
  });
}

double boundary_integral(const PolyPatch& patch, const DifferentialForm& alpha) {
  if (alpha.degree() != patch.degree() - 1 || alpha.dim() != patch.dim())
    throw std::invalid_argument("boundary form must have degree one less than the patch");
  const auto& v = patch.vertices();
  if (patch.degree() == 1) return alpha.value(v.back()) - alpha.value(v.front());
  const auto edges = patch.boundary_edges();
  return parallel_sum(edges.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i)
      s += chord_integral(alpha, v[static_cast<std::size_t>(edges[i].first)], v[static_cast<std::size_t>(edges[i].second)]);
    return s;
  });
}

CurrentSample evaluate_current(const PolyPatch& patch, const DifferentialForm& omega, int n) {
  const double vol = patch_volume(patch);
  return {n, integrate(patch, omega) / vol, vol};
}

Eigen::VectorXd empirical_class(const PolyPatch& patch) {
  const auto idx = subsets(patch.dim(), patch.degree());
  Eigen::VectorXd c(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    c[static_cast<Eigen::Index>(i)] = integrate(patch, DifferentialForm::basis(patch.dim(), idx[i]));
  c.normalize();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > 1e-12) {
      if (c[i] < 0) c = -c;
      break;
    }
  }
  return c;
}

std::vector<DefectSample> closedness_defects(const ToralDiffeo& map, const TorusPoint& x, double r,
                                             const DifferentialForm& alpha, int n_max, const GrowthOptions& opts) {
  if (n_max < 0) throw std::invalid_argument("n must be non-negative");
  const int k = alpha.degree() + 1;
  const DifferentialForm d_alpha = alpha.exterior_derivative();
  std::vector<DefectSample> out;
  iterate_patch(map, seed_unstable_disk(map, x, r, k, opts.max_edge, opts.frame), n_max, opts,
                [&](int n, const PolyPatch& p) {
                  const double vol = patch_volume(p);
                  out.push_back({n, boundary_integral(p, alpha) / vol, integrate(p, d_alpha) / vol, vol});
                });
  return out;
}

double closedness_defect(const ToralDiffeo& map, const TorusPoint& x, double r, int n, const DifferentialForm& alpha,
                         const GrowthOptions& opts) {
  return closedness_defects(map, x, r, alpha, n, opts).back().defect;
}

DecayFit fit_defect_decay(const std::vector<DefectSample>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("decay fit needs at least two samples");
  std::vector<double> env(samples.size());
  double tail = 0.0;
  for (std::size_t i = samples.size(); i-- > 0;) {
    tail = std::max(tail, std::abs(samples[i].defect));
    env[i] = tail;
  }
  if (env.front() == 0.0) return {0.0, 0.0};
  // Fit only where the envelope is positive.
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (env[i] > 0.0) {
      xs.push_back(samples[i].n);
      ys.push_back(std::log(env[i]));
    }
  DecayFit f;
  if (xs.size() < 2) {
    f.rho = 0.0;
  } else {
    f.rho = std::exp(fit_line(xs, ys).slope);
  }
  for (const auto& s : samples)
    if (f.rho > 0.0) f.constant = std::max(f.constant, std::abs(s.defect) * std::pow(f.rho, -s.n));
  return f;
}

}  // namespace phlab
