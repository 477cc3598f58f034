#pragma once

#include "phlab/core/ph_constants.hpp"
#include "phlab/core/toral_diffeo.hpp"

#include <cstdint>
#include <vector>

namespace phlab {

struct LyapunovOptions {
  int reorth_every = 1;
  int warmup = 200;  // frame-alignment steps before accumulation starts
};

struct LyapunovSpectrum {
  std::vector<double> exponents;        // descending
  std::vector<double> convergence_gap;  // |estimate at N - estimate at N/2|, aligned with exponents
  Vec seed;
  long iterates = 0;
  int reorth_every = 1;
  int warmup = 0;

  double sum() const;
  double max_gap() const;
};

/// Pushes an orthonormal frame along the orbit of x, re-orthonormalizing by
/// QR every reorth_every steps and averaging the log diagonal of R.
/// Throws std::invalid_argument for n < 1000 and std::overflow_error when a
/// block of reorth_every differentials overflows or loses the weakest direction.
LyapunovSpectrum lyapunov_spectrum(const ToralDiffeo& map, const Vec& x, long n, const LyapunovOptions& opts = {});

/// Spectrum of the inverse map accumulated over the same orbit segment that
/// lyapunov_spectrum(map, x, n, opts) uses, walked backwards with the inverse
/// differentials. Comparing the two isolates finite-N boundary effects from
/// orbit-to-orbit variation.
LyapunovSpectrum inverse_spectrum_on_orbit(const ToralDiffeo& map, const Vec& x, long n,
                                           const LyapunovOptions& opts = {});

struct EnsembleSpectrum {
  std::vector<LyapunovSpectrum> orbits;
  std::vector<double> mean;    // per-index mean over orbits
  std::vector<double> spread;  // per-index max - min over orbits
  std::uint64_t seed = 0;
};

/// Spectra along `orbits` quasi-random seed points, computed concurrently and
/// merged in seed order.
EnsembleSpectrum lyapunov_ensemble(const ToralDiffeo& map, int orbits, long n, std::uint64_t seed,
                                   const LyapunovOptions& opts = {});

/// Exponents below `lower` are stable, above `upper` unstable, the rest center.
class ExponentBands {
 public:
  /// Throws std::invalid_argument unless lower <= upper.
  ExponentBands(double lower, double upper);
  /// (log lambda_c' - margin, log lambda_c'' + margin).
  static ExponentBands from_constants(const PHConstants& c, double margin = 0.1);

  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_, upper_;
};

struct ClassifiedExponents {
  std::vector<double> stable, center, unstable;
  double center_term = 0.0;  // sum of max(lambda, 0) over center exponents
  bool ambiguous = false;    // some exponent lies near a band boundary
  std::vector<double> ambiguous_exponents;
};

ClassifiedExponents classify_exponents(const std::vector<double>& exponents, const ExponentBands& bands,
                                       double ambiguity = 1e-3);

/// center_term + chi_u - h_nu; h_nu <= center_term + chi_u predicts a non-negative margin.
double refined_pesin_ruelle_check(double h_nu, double center_term, double chi_u);

}  // namespace phlab
