#pragma once

#include "phlab/entropy/dynamics.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace phlab {

/// Orbit segments x, f x, ..., f^n x of every sample point, stored in single
/// precision (point-major, then time, then coordinate).
class OrbitBank {
 public:
  OrbitBank(const Dynamics& dyn, const std::vector<double>& sample, int n_max);

  std::size_t size() const { return points_; }
  int n_max() const { return n_max_; }
  int dim() const { return dim_; }
  const float* at(std::size_t point, int time) const {
    return data_.data() + (point * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(time)) * static_cast<std::size_t>(dim_);
  }

 private:
  std::size_t points_;
  int n_max_;
  int dim_;
  std::vector<float> data_;
};

/// Greedy (n, eps)-separated subset of the bank's sample: points are
/// admitted in sample order when their orbit segment over times 0..n is at
/// distance >= eps at some time from every admitted point. The pass stops
/// early once more than stop_above points are admitted.
std::size_t count_separated(const Dynamics& dyn, const OrbitBank& bank, int n, double eps,
                            std::size_t stop_above = SIZE_MAX);
std::size_t count_separated(const Dynamics& dyn, int n, double eps, const std::vector<double>& sample);

/// s(n, eps) for every eps on a ladder. Row i holds n = 0, 1, ... up to
/// n_max or up to and including the first saturated iterate, whichever
/// comes first. The saturated entry is a lower bound: its pass stops just
/// past the saturation level.
struct SeparatedSetTable {
  std::vector<double> eps;
  int n_max = 0;
  std::vector<std::vector<std::size_t>> counts;  // [eps index][n]
  std::vector<bool> truncated;                   // last entry of the row is a lower bound
  std::size_t sample_size = 0;
  std::string sampling;

  int computed(std::size_t eps_index) const { return static_cast<int>(counts[eps_index].size()) - 1; }
  std::size_t at(std::size_t eps_index, int n) const { return counts[eps_index][static_cast<std::size_t>(n)]; }
};

/// Growth rate of ln s(n, eps) for one eps.
struct EpsilonRate {
  double eps = 0.0;
  double rate = 0.0;
  double r_squared = 0.0;
  int n_lo = 0;
  int n_hi = -1;
  int saturated_at = -1;  // first n with s(n, eps) > saturation_fraction * sample size, or -1
  bool usable() const { return n_hi - n_lo >= 1; }
};

struct EntropyOptions {
  int n_min = 2;                      // first iterate used in the fit
  double saturation_fraction = 0.02;  // of the sample size
};

struct EntropyEstimate {
  SeparatedSetTable table;
  std::vector<EpsilonRate> h_of_eps;
  double h_hat = 0.0;
  double eps_used = 0.0;
};

SeparatedSetTable separated_table(const Dynamics& dyn, const std::vector<double>& eps_ladder, int n_max,
                                  const std::vector<double>& sample, const std::string& sampling = {},
                                  const EntropyOptions& opts = {});

/// Fits the per-eps rates strictly before saturation and reports the rate
/// at the smallest eps with at least two unsaturated iterates. Throws
/// PreconditionError("all eps saturated ...") when no eps is usable.
EntropyEstimate fit_entropy(SeparatedSetTable table, const EntropyOptions& opts = {});

/// separated_table followed by fit_entropy. Throws std::invalid_argument when
/// the ladder is not strictly decreasing.
EntropyEstimate estimate_topological_entropy(const Dynamics& dyn, const std::vector<double>& eps_ladder, int n_max,
                                             const std::vector<double>& sample, const std::string& sampling = {},
                                             const EntropyOptions& opts = {});

}  // namespace phlab
