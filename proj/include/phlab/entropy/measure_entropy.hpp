#pragma once

#include "phlab/entropy/dynamics.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace phlab {

/// Half-open boxes tiling [0,1)^d, resolution[i] boxes along coordinate i.
class GridPartition {
 public:
  explicit GridPartition(std::vector<int> resolution);

  int dim() const { return static_cast<int>(resolution_.size()); }
  const std::vector<int>& resolution() const { return resolution_; }
  std::uint32_t cell_count() const { return cells_; }
  /// Row-major cell id (last coordinate fastest) of a point in [0,1)^d.
  std::uint32_t cell_of(const double* x) const;

 private:
  std::vector<int> resolution_;
  std::uint32_t cells_ = 1;
};

struct MeasureEntropyOptions {
  int m_max = 8;
  double plateau_tolerance = 0.01;
  std::size_t min_word_count = 10;  // conditioning words rarer than this count as rare
  double rare_mass_limit = 0.01;    // rare words above this share of the orbit flag the estimate
};

/// Conditional entropy of the next cell given the previous m cells.
struct ConditionalEntropy {
  int m = 0;
  double value = 0.0;
  std::size_t distinct_words = 0;      // conditioning words of length m
  std::size_t rarest_word_count = 0;
  double rare_mass = 0.0;  // share of orbit positions starting a rare conditioning word
  bool undersampled = false;
};

struct MeasureEntropyEstimate {
  double h = 0.0;
  int m_used = 0;
  bool plateau_found = false;
  bool biased_low = false;  // the conditioning words at m_used are undersampled
  std::vector<ConditionalEntropy> conditional;
  std::size_t orbit_length = 0;
  std::uint64_t seed = 0;
};

/// Codes one orbit by partition cells and returns the first conditional
/// entropy that differs from its predecessor by less than the plateau
/// tolerance. The scan also stops at the first undersampled word length,
/// whose value is returned flagged as biased low, or at m_max.
MeasureEntropyEstimate estimate_measure_entropy(const Dynamics& dyn, const GridPartition& partition,
                                                std::size_t orbit_length, std::size_t burn_in, std::uint64_t seed,
                                                const MeasureEntropyOptions& opts = {});

/// Shannon entropy of a cell sequence's empirical word distribution for words
/// of length 1..m_max + 1, entry k holding length k + 1. Exposed for testing.
std::vector<double> block_entropies(const std::vector<std::uint32_t>& cells, int m_max);

}  // namespace phlab
