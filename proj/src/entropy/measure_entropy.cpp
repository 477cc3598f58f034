#include "phlab/entropy/measure_entropy.hpp"

#include "phlab/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace phlab {
namespace {

// Open-addressing map from (word id, next cell) to the id of the longer word.
class WordTable {
 public:
  explicit WordTable(std::size_t expected) {
    std::size_t cap = 1024;
    while (cap < 2 * expected) cap *= 2;
    keys_.assign(cap, kEmpty);
    values_.assign(cap, 0);
  }

  std::uint32_t intern(std::uint64_t key) {
    std::size_t mask = keys_.size() - 1;
    std::size_t slot = mix(key) & mask;
    while (keys_[slot] != kEmpty) {
      if (keys_[slot] == key) return values_[slot];
      slot = (slot + 1) & mask;
    }
    const auto id = static_cast<std::uint32_t>(size_);
    keys_[slot] = key;
    values_[slot] = id;
    if (++size_ * 2 > keys_.size()) grow();
    return id;
  }

  std::size_t size() const { return size_; }

 private:
  static constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

  static std::size_t mix(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }

  void grow() {
    std::vector<std::uint64_t> keys(keys_.size() * 2, kEmpty);
    std::vector<std::uint32_t> values(keys.size(), 0);
    const std::size_t mask = keys.size() - 1;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] == kEmpty) continue;
      std::size_t slot = mix(keys_[i]) & mask;
      while (keys[slot] != kEmpty) slot = (slot + 1) & mask;
      keys[slot] = keys_[i];
      values[slot] = values_[i];
    }
    keys_ = std::move(keys);
    values_ = std::move(values);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> values_;
  std::size_t size_ = 0;
};

// Word ids of one length over every start position, with their frequencies.
struct WordLevel {
  int length = 0;
  std::vector<std::uint32_t> ids;
  std::vector<std::size_t> counts;
};

WordLevel first_level(const std::vector<std::uint32_t>& cells) {
  WordLevel w;
  w.length = 1;
  WordTable table(1024);
  w.ids.resize(cells.size());
  for (std::size_t t = 0; t < cells.size(); ++t) w.ids[t] = table.intern(cells[t]);
  w.counts.assign(table.size(), 0);
  for (auto id : w.ids) ++w.counts[id];
  return w;
}

WordLevel extend(const WordLevel& prev, const std::vector<std::uint32_t>& cells) {
  WordLevel w;
  w.length = prev.length + 1;
  const std::size_t words = cells.size() - static_cast<std::size_t>(w.length) + 1;
  WordTable table(std::min(words, prev.counts.size() * 4));
  w.ids.resize(words);
  for (std::size_t t = 0; t < words; ++t) {
    const std::uint64_t key = (static_cast<std::uint64_t>(prev.ids[t]) << 32) | cells[t + static_cast<std::size_t>(prev.length)];
    w.ids[t] = table.intern(key);
  }
  w.counts.assign(table.size(), 0);
  for (auto id : w.ids) ++w.counts[id];
  return w;
}

double shannon(const WordLevel& w) {
  const auto total = static_cast<double>(w.ids.size());
  return parallel_sum(w.counts.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double p = static_cast<double>(w.counts[i]) / total;
      s -= p * std::log(p);
    }
    return s;
  });
}

}  // namespace

GridPartition::GridPartition(std::vector<int> resolution) : resolution_(std::move(resolution)) {
  if (resolution_.empty() || resolution_.size() > static_cast<std::size_t>(kMaxStateDim))
    throw std::invalid_argument("partition dimension must be 1..4");
  std::uint64_t cells = 1;
  for (int r : resolution_) {
    if (r < 1) throw std::invalid_argument("partition resolution must be positive");
    cells *= static_cast<std::uint64_t>(r);
  }
  if (cells > (1ULL << 31)) throw std::invalid_argument("partition has too many cells");
  cells_ = static_cast<std::uint32_t>(cells);
}

std::uint32_t GridPartition::cell_of(const double* x) const {
  std::uint32_t id = 0;
  for (std::size_t i = 0; i < resolution_.size(); ++i) {
    const int r = resolution_[i];
    const int c = std::clamp(static_cast<int>(std::floor(x[i] * r)), 0, r - 1);
    id = id * static_cast<std::uint32_t>(r) + static_cast<std::uint32_t>(c);
  }
  return id;
}

std::vector<double> block_entropies(const std::vector<std::uint32_t>& cells, int m_max) {
  if (m_max < 0) throw std::invalid_argument("m_max must be non-negative");
  if (cells.size() < static_cast<std::size_t>(m_max) + 1) throw std::invalid_argument("sequence shorter than the longest word");
  std::vector<double> out;
  WordLevel w = first_level(cells);
  out.push_back(shannon(w));
  for (int len = 2; len <= m_max + 1; ++len) {
    w = extend(w, cells);
    out.push_back(shannon(w));
  }
  return out;
}

MeasureEntropyEstimate estimate_measure_entropy(const Dynamics& dyn, const GridPartition& partition,
                                                std::size_t orbit_length, std::size_t burn_in, std::uint64_t seed,
                                                const MeasureEntropyOptions& opts) {
  if (partition.dim() != dyn.state_dim()) throw std::invalid_argument("partition dimension does not match the dynamics");
  if (!(opts.rare_mass_limit >= 0.0 && opts.rare_mass_limit < 1.0)) throw std::invalid_argument("rare mass limit must be in [0, 1)");
  if (opts.m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  if (orbit_length < static_cast<std::size_t>(opts.m_max) + 2) throw std::invalid_argument("orbit too short for the word lengths");
  if (orbit_length > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("orbit too long");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  State x{}, y{};
  for (int i = 0; i < dyn.state_dim(); ++i) x[static_cast<std::size_t>(i)] = u(rng);
  for (std::size_t t = 0; t < burn_in; ++t) {
    dyn.step(x.data(), y.data());
    x = y;
  }
  std::vector<std::uint32_t> cells(orbit_length);
  for (std::size_t t = 0; t < orbit_length; ++t) {
    cells[t] = partition.cell_of(x.data());
    dyn.step(x.data(), y.data());
    x = y;
  }

  MeasureEntropyEstimate est;
  est.orbit_length = orbit_length;
  est.seed = seed;
  WordLevel cond = first_level(cells);
  double h_cond = shannon(cond);
  for (int m = 1; m <= opts.m_max; ++m) {
    WordLevel next = extend(cond, cells);
    const double h_next = shannon(next);
    ConditionalEntropy c;
    c.m = m;
    c.value = std::max(0.0, h_next - h_cond);
    c.distinct_words = cond.counts.size();
    c.rarest_word_count = *std::min_element(cond.counts.begin(), cond.counts.end());
    std::size_t rare = 0;
    for (auto n : cond.counts)
      if (n < opts.min_word_count) rare += n;
    c.rare_mass = static_cast<double>(rare) / static_cast<double>(cond.ids.size());
    c.undersampled = c.rare_mass > opts.rare_mass_limit;
    est.conditional.push_back(c);
    if (m > 1 && std::abs(c.value - est.conditional[est.conditional.size() - 2].value) < opts.plateau_tolerance) {
      est.plateau_found = true;
      break;
    }
    // Longer words only thin the sample further.
    if (c.undersampled) break;
    cond = std::move(next);
    h_cond = h_next;
  }
  const ConditionalEntropy& last = est.conditional.back();
  est.h = last.value;
  est.m_used = last.m;
  est.biased_low = last.undersampled;
  return est;
}

}  // namespace phlab
