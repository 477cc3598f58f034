#include "phlab/lyapunov/spectrum.hpp"

#include "phlab/core/parallel.hpp"
#include "phlab/core/quasi_random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace phlab {
namespace {

constexpr double kHuge = 1e300;
// Below this ratio to the leading diagonal the weakest direction is roundoff.
constexpr double kRelativeFloor = 1e-15;

void check_inputs(const ToralDiffeo& map, const Vec& x, long n, const LyapunovOptions& opts) {
  if (n < 1000) throw std::invalid_argument("lyapunov_spectrum needs N >= 1000");
  if (opts.reorth_every < 1) throw std::invalid_argument("reorth_every must be at least 1");
  if (opts.warmup < 0) throw std::invalid_argument("warmup must be non-negative");
  if (x.size() != map.dim()) throw std::invalid_argument("seed point dimension does not match the map");
}

Vec wrap(Vec v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] -= std::floor(v[i]);
  return v;
}

// Runs warmup + n frame pushes; step(j, frame) returns the pushed frame for
// step j. Accumulation starts after the warm-up.
template <class Step>
LyapunovSpectrum accumulate(int dim, long n, const LyapunovOptions& opts, Step step) {
  Mat q = Mat::Identity(dim, dim);
  std::vector<double> sums(static_cast<std::size_t>(dim), 0.0), half(sums.size(), 0.0);
  long j = 0, counted = 0, half_counted = 0;
  // The warm-up and the accumulation run as separate block sequences.
  for (int phase = 0; phase < 2; ++phase) {
    const bool count = phase == 1;
    const long end = j + (count ? n : opts.warmup);
    while (j < end) {
      const long block = std::min<long>(opts.reorth_every, end - j);
      Mat m = q;
      for (long b = 0; b < block; ++b) m = step(j + b, m);
      Eigen::HouseholderQR<Mat> qr(m);
      const Mat r = qr.matrixQR().template triangularView<Eigen::Upper>();
      double lead = 0.0;
      for (int i = 0; i < dim; ++i) lead = std::max(lead, std::abs(r(i, i)));
      for (int i = 0; i < dim; ++i) {
        const double d = std::abs(r(i, i));
        if (!std::isfinite(d) || d > kHuge || d < 1.0 / kHuge || d < kRelativeFloor * lead)
          throw std::overflow_error(
              "differential overflow or underflow between re-orthonormalizations; use a smaller reorth_every");
      }
      Mat qn = qr.householderQ() * Mat::Identity(dim, dim);
      // Positive diagonal keeps the frame continuous from block to block.
      for (int i = 0; i < dim; ++i)
        if (r(i, i) < 0.0) qn.col(i) = -qn.col(i);
      q = qn;
      j += block;
      if (!count) continue;
      for (int i = 0; i < dim; ++i) sums[static_cast<std::size_t>(i)] += std::log(std::abs(r(i, i)));
      counted += block;
      if (half_counted == 0 && counted >= n / 2) {
        half = sums;
        half_counted = counted;
      }
    }
  }
  LyapunovSpectrum s;
  s.iterates = n;
  s.reorth_every = opts.reorth_every;
  s.warmup = opts.warmup;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 0; k < sums.size(); ++k) {
    const double full = sums[k] / static_cast<double>(counted);
    const double mid = half[k] / static_cast<double>(half_counted);
    pairs.emplace_back(full, std::abs(full - mid));
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [e, g] : pairs) {
    s.exponents.push_back(e);
    s.convergence_gap.push_back(g);
  }
  return s;
}

}  // namespace

double LyapunovSpectrum::sum() const { return std::accumulate(exponents.begin(), exponents.end(), 0.0); }

double LyapunovSpectrum::max_gap() const {
  return convergence_gap.empty() ? 0.0 : *std::max_element(convergence_gap.begin(), convergence_gap.end());
}

LyapunovSpectrum lyapunov_spectrum(const ToralDiffeo& map, const Vec& x, long n, const LyapunovOptions& opts) {
  check_inputs(map, x, n, opts);
  Vec p = wrap(x);
  LyapunovSpectrum s = accumulate(map.dim(), n, opts, [&](long, const Mat& frame) {
    Mat out = map.differential(p) * frame;
    p = wrap(map.apply_lift(p));
    return out;
  });
  s.seed = x;
  return s;
}

LyapunovSpectrum inverse_spectrum_on_orbit(const ToralDiffeo& map, const Vec& x, long n, const LyapunovOptions& opts) {
  check_inputs(map, x, n, opts);
  const long len = 2L * opts.warmup + n;
  std::vector<Vec> orbit(static_cast<std::size_t>(len));
  Vec p = wrap(x);
  for (long j = 0; j < len; ++j) {
    orbit[static_cast<std::size_t>(j)] = p;
    p = wrap(map.apply_lift(p));
  }
  // Step j of the backward walk applies D(f^-1) at f(x_k) = Df(x_k)^-1, k = len - 1 - j.
  LyapunovSpectrum s = accumulate(map.dim(), n, opts, [&](long j, const Mat& frame) {
    const Mat d = map.differential(orbit[static_cast<std::size_t>(len - 1 - j)]);
    return Mat(d.partialPivLu().solve(frame));
  });
  s.seed = x;
  return s;
}

EnsembleSpectrum lyapunov_ensemble(const ToralDiffeo& map, int orbits, long n, std::uint64_t seed,
                                   const LyapunovOptions& opts) {
  if (orbits < 1) throw std::invalid_argument("ensemble needs at least one orbit");
  EnsembleSpectrum e;
  e.seed = seed;
  e.orbits.resize(static_cast<std::size_t>(orbits));
  parallel_for(e.orbits.size(), [&](std::size_t b, std::size_t end) {
    for (std::size_t i = b; i < end; ++i)
      e.orbits[i] = lyapunov_spectrum(map, quasi_random_point(map.dim(), i, seed), n, opts);
  });
  const auto dim = static_cast<std::size_t>(map.dim());
  e.mean.assign(dim, 0.0);
  e.spread.assign(dim, 0.0);
  for (std::size_t k = 0; k < dim; ++k) {
    double lo = e.orbits[0].exponents[k], hi = lo;
    for (const auto& o : e.orbits) {
      e.mean[k] += o.exponents[k];
      lo = std::min(lo, o.exponents[k]);
      hi = std::max(hi, o.exponents[k]);
    }
    e.mean[k] /= orbits;
    e.spread[k] = hi - lo;
  }
  return e;
}

ExponentBands::ExponentBands(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!(lower <= upper)) throw std::invalid_argument("band boundaries must satisfy lower <= upper");
}

ExponentBands ExponentBands::from_constants(const PHConstants& c, double margin) {
  return ExponentBands(std::log(c.lambda_c_lo()) - margin, std::log(c.lambda_c_hi()) + margin);
}

ClassifiedExponents classify_exponents(const std::vector<double>& exponents, const ExponentBands& bands,
                                       double ambiguity) {
  ClassifiedExponents out;
  for (double e : exponents) {
    if (e < bands.lower()) out.stable.push_back(e);
    else if (e > bands.upper()) out.unstable.push_back(e);
    else {
      out.center.push_back(e);
      out.center_term += std::max(e, 0.0);
    }
    if (std::abs(e - bands.lower()) < ambiguity || std::abs(e - bands.upper()) < ambiguity) {
      out.ambiguous = true;
      out.ambiguous_exponents.push_back(e);
    }
  }
  return out;
}

double refined_pesin_ruelle_check(double h_nu, double center_term, double chi_u) { return center_term + chi_u - h_nu; }

}  // namespace phlab
