#include "phlab/entropy/separated.hpp"

#include "phlab/core/fit.hpp"
#include "phlab/core/parallel.hpp"
#include "phlab/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace phlab {
namespace {

// Neighbour search over admitted points, keyed on the grid cells of the
// time-0 and time-n positions. Every point within eps of a coordinate lies
// in one of the cells meeting [v - eps, v + eps]. Coarse eps on planar
// states gets cells narrower than 2 eps so buckets stay small; in higher
// dimensions the extra lookups cost more than they save.
class BowenHash {
 public:
  BowenHash(const Dynamics& dyn, double eps) : d_(dyn.state_dim()), eps_(eps) {
    const int coarse = static_cast<int>(std::floor(1.0 / (2.0 * eps)));
    const int q = coarse <= 4 && d_ <= 2 ? 2 : 1;
    m_ = std::max(1, static_cast<int>(std::floor(q / (2.0 * eps))));
    for (int i = 0; i < d_; ++i) periodic_[static_cast<std::size_t>(i)] = dyn.periodic(i);
  }

  void insert(const double* a, const double* b, int id) {
    std::array<int, 2 * kMaxStateDim> cell{};
    for (int i = 0; i < d_; ++i) {
      cell[static_cast<std::size_t>(i)] = wrap(static_cast<int>(std::floor(a[i] * m_)), i);
      cell[static_cast<std::size_t>(d_ + i)] = wrap(static_cast<int>(std::floor(b[i] * m_)), i);
    }
    const auto node = static_cast<int>(nodes_.size());
    auto [it, fresh] = head_.try_emplace(pack(cell), node);
    nodes_.push_back({id, fresh ? -1 : it->second});
    it->second = node;
  }

  // Calls visit(id) for every admitted point in the candidate cells of the
  // representations (a, b); stops early when visit returns true.
  template <class Visit>
  bool probe(const double* a, const double* b, Visit&& visit) const {
    const int dims = 2 * d_;
    std::array<std::array<int, kMaxSpan>, 2 * kMaxStateDim> choice{};
    std::array<int, 2 * kMaxStateDim> count{};
    for (int i = 0; i < d_; ++i) {
      count[static_cast<std::size_t>(i)] = candidates(a[i], i, choice[static_cast<std::size_t>(i)]);
      count[static_cast<std::size_t>(d_ + i)] = candidates(b[i], i, choice[static_cast<std::size_t>(d_ + i)]);
    }
    std::array<int, 2 * kMaxStateDim> pos{}, cell{};
    for (;;) {
      for (int j = 0; j < dims; ++j)
        cell[static_cast<std::size_t>(j)] = choice[static_cast<std::size_t>(j)][static_cast<std::size_t>(pos[static_cast<std::size_t>(j)])];
      auto it = head_.find(pack(cell));
      if (it != head_.end()) {
        for (int k = it->second; k >= 0; k = nodes_[static_cast<std::size_t>(k)].next)
          if (visit(nodes_[static_cast<std::size_t>(k)].id)) return true;
      }
      int j = 0;
      while (j < dims && ++pos[static_cast<std::size_t>(j)] == count[static_cast<std::size_t>(j)]) pos[static_cast<std::size_t>(j++)] = 0;
      if (j == dims) return false;
    }
  }

 private:
  static constexpr int kMaxSpan = 4;

  int wrap(int c, int coord) const {
    return periodic_[static_cast<std::size_t>(coord)] ? ((c % m_) + m_) % m_ : c;
  }

  int candidates(double v, int coord, std::array<int, kMaxSpan>& out) const {
    const int lo = static_cast<int>(std::floor((v - eps_) * m_));
    const int hi = static_cast<int>(std::floor((v + eps_) * m_));
    int k = 0;
    for (int c = lo; c <= hi && k < kMaxSpan; ++c) {
      const int w = wrap(c, coord);
      bool seen = false;
      for (int j = 0; j < k; ++j) seen = seen || out[static_cast<std::size_t>(j)] == w;
      if (!seen) out[static_cast<std::size_t>(k++)] = w;
    }
    return k;
  }

  std::uint64_t pack(const std::array<int, 2 * kMaxStateDim>& cell) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int j = 0; j < 2 * d_; ++j) {
      h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(cell[static_cast<std::size_t>(j)]) + 2);
      h *= 1099511628211ULL;
    }
    return h;
  }

  int d_;
  double eps_;
  int m_ = 1;
  std::array<bool, kMaxStateDim> periodic_{};
  struct Node {
    int id;
    int next;
  };
  std::unordered_map<std::uint64_t, int> head_;
  std::vector<Node> nodes_;
};

void load(const float* src, int d, double* dst) {
  for (int i = 0; i < d; ++i) dst[i] = src[i];
}

template <class D>
bool within(const D& dyn, const float* a, const float* b, int d, double eps) {
  State p{}, q{};
  load(a, d, p.data());
  load(b, d, q.data());
  return dyn.distance(p.data(), q.data()) < eps;
}

// Quotient metric inlined; the same value torus_distance returns.
bool within(const ToralDynamics&, const float* a, const float* b, int d, double eps) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double g = static_cast<double>(b[i]) - static_cast<double>(a[i]);
    g -= static_cast<double>(static_cast<long long>(g + (g >= 0.0 ? 0.5 : -0.5)));
    s += g * g;
  }
  return s < eps * eps;
}

template <class D>
std::size_t greedy_count(const D& dyn, const OrbitBank& bank, int n, double eps, std::size_t stop_above) {
  const int d = bank.dim();
  BowenHash hash(dyn, eps);
  // Admitted segments are copied contiguously, end point first, so the
  // neighbour scan stays in cache.
  const std::size_t rec = static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(d);
  std::vector<float> segments, current(rec);
  std::size_t admitted = 0;
  std::vector<State> alt_a, alt_b;
  std::vector<State> reps_a, reps_b;

  for (std::size_t i = 0; i < bank.size(); ++i) {
    State a{}, b{};
    load(bank.at(i, 0), d, a.data());
    load(bank.at(i, n), d, b.data());
    dyn.alternates(a.data(), eps, alt_a);
    dyn.alternates(b.data(), eps, alt_b);
    reps_a.assign(1, a);
    reps_a.insert(reps_a.end(), alt_a.begin(), alt_a.end());
    reps_b.assign(1, b);
    reps_b.insert(reps_b.end(), alt_b.begin(), alt_b.end());
    for (int k = 0; k <= n; ++k) {
      const float* src = bank.at(i, k == 0 ? n : k - 1);
      std::copy(src, src + d, current.begin() + static_cast<std::ptrdiff_t>(k * d));
    }

    auto close = [&](int id) {
      const float* other = segments.data() + static_cast<std::size_t>(id) * rec;
      for (int k = 0; k <= n; ++k)
        if (!within(dyn, current.data() + k * d, other + k * d, d, eps)) return false;
      return true;
    };
    bool rejected = false;
    for (const auto& ra : reps_a) {
      for (const auto& rb : reps_b) {
        if (hash.probe(ra.data(), rb.data(), close)) {
          rejected = true;
          break;
        }
      }
      if (rejected) break;
    }
    if (rejected) continue;
    // Stored and probing points both use every representation, so a pair
    // close across an identification meets in the matching coordinates.
    for (const auto& ra : reps_a)
      for (const auto& rb : reps_b) hash.insert(ra.data(), rb.data(), static_cast<int>(admitted));
    ++admitted;
    segments.insert(segments.end(), current.begin(), current.end());
    if (admitted > stop_above) break;
  }
  return admitted;
}

}  // namespace

OrbitBank::OrbitBank(const Dynamics& dyn, const std::vector<double>& sample, int n_max)
    : points_(0), n_max_(n_max), dim_(dyn.state_dim()) {
  if (n_max < 0) throw std::invalid_argument("orbit length must be non-negative");
  const auto d = static_cast<std::size_t>(dim_);
  if (sample.size() % d != 0) throw std::invalid_argument("sample size is not a multiple of the state dimension");
  points_ = sample.size() / d;
  const std::size_t stride = static_cast<std::size_t>(n_max + 1) * d;
  data_.resize(points_ * stride);
  parallel_for(points_, [&](std::size_t b, std::size_t e) {
    State cur{}, nxt{};
    for (std::size_t p = b; p < e; ++p) {
      for (std::size_t i = 0; i < d; ++i) cur[i] = sample[p * d + i];
      for (int t = 0; t <= n_max; ++t) {
        for (std::size_t i = 0; i < d; ++i) data_[p * stride + static_cast<std::size_t>(t) * d + i] = static_cast<float>(cur[i]);
        if (t < n_max) {
          dyn.step(cur.data(), nxt.data());
          cur = nxt;
        }
      }
    }
  });
}

std::size_t count_separated(const Dynamics& dyn, const OrbitBank& bank, int n, double eps, std::size_t stop_above) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (n < 0 || n > bank.n_max()) throw std::invalid_argument("n outside the orbit bank");
  if (bank.dim() != dyn.state_dim()) throw std::invalid_argument("orbit bank does not match the dynamics");
  // Dispatch to the concrete type so the distance call inlines.
  if (const auto* t = dynamic_cast<const ToralDynamics*>(&dyn)) return greedy_count(*t, bank, n, eps, stop_above);
  if (const auto* t = dynamic_cast<const SuspensionTimeMap*>(&dyn)) return greedy_count(*t, bank, n, eps, stop_above);
  if (const auto* t = dynamic_cast<const CircleRotation*>(&dyn)) return greedy_count(*t, bank, n, eps, stop_above);
  return greedy_count(dyn, bank, n, eps, stop_above);
}

std::size_t count_separated(const Dynamics& dyn, int n, double eps, const std::vector<double>& sample) {
  return count_separated(dyn, OrbitBank(dyn, sample, n), n, eps);
}

SeparatedSetTable separated_table(const Dynamics& dyn, const std::vector<double>& eps_ladder, int n_max,
                                  const std::vector<double>& sample, const std::string& sampling,
                                  const EntropyOptions& opts) {
  if (eps_ladder.empty()) throw std::invalid_argument("eps ladder is empty");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0)) throw std::invalid_argument("eps must be positive");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1])) throw std::invalid_argument("eps ladder must be strictly decreasing");
  }
  const OrbitBank bank(dyn, sample, n_max);
  SeparatedSetTable t;
  t.eps = eps_ladder;
  t.n_max = n_max;
  t.sample_size = bank.size();
  t.sampling = sampling.empty() ? std::to_string(bank.size()) + " points" : sampling;
  t.counts.assign(eps_ladder.size(), {});
  t.truncated.assign(eps_ladder.size(), false);
  const auto limit = static_cast<std::size_t>(std::floor(opts.saturation_fraction * static_cast<double>(bank.size())));
  // Each greedy pass is sequential; the ladder rungs are independent.
  std::vector<char> cut(eps_ladder.size(), 0);
  parallel_for(eps_ladder.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t ei = b; ei < e; ++ei) {
      for (int n = 0; n <= n_max; ++n) {
        const std::size_t c = count_separated(dyn, bank, n, eps_ladder[ei], limit);
        t.counts[ei].push_back(c);
        if (c > limit) {
          cut[ei] = 1;
          break;
        }
      }
    }
  });
  for (std::size_t ei = 0; ei < cut.size(); ++ei) t.truncated[ei] = cut[ei] != 0;
  return t;
}

EntropyEstimate fit_entropy(SeparatedSetTable table, const EntropyOptions& opts) {
  EntropyEstimate est;
  const auto limit = static_cast<std::size_t>(std::floor(opts.saturation_fraction * static_cast<double>(table.sample_size)));
  for (std::size_t ei = 0; ei < table.eps.size(); ++ei) {
    EpsilonRate r;
    r.eps = table.eps[ei];
    for (int n = 0; n <= table.computed(ei); ++n) {
      if (table.at(ei, n) > limit) {
        r.saturated_at = n;
        break;
      }
    }
    r.n_lo = opts.n_min;
    r.n_hi = r.saturated_at < 0 ? table.computed(ei) : r.saturated_at - 1;
    if (r.usable()) {
      std::vector<double> xs, ys;
      for (int n = r.n_lo; n <= r.n_hi; ++n) {
        xs.push_back(n);
        ys.push_back(std::log(static_cast<double>(table.at(ei, n))));
      }
      const LineFit f = fit_line(xs, ys);
      r.rate = std::max(0.0, f.slope);
      r.r_squared = f.r_squared;
    }
    est.h_of_eps.push_back(r);
  }
  const EpsilonRate* best = nullptr;
  for (const auto& r : est.h_of_eps)
    if (r.usable()) best = &r;  // the ladder is decreasing, so the last usable eps is the smallest
  if (best == nullptr) {
    std::ostringstream os;
    os << "all eps saturated: every eps on the ladder exceeds " << opts.saturation_fraction
       << " of the sample before two fit points; use a finer sample or larger eps";
    throw PreconditionError(os.str());
  }
  est.h_hat = best->rate;
  est.eps_used = best->eps;
  est.table = std::move(table);
  return est;
}

EntropyEstimate estimate_topological_entropy(const Dynamics& dyn, const std::vector<double>& eps_ladder, int n_max,
                                             const std::vector<double>& sample, const std::string& sampling,
                                             const EntropyOptions& opts) {
  return fit_entropy(separated_table(dyn, eps_ladder, n_max, sample, sampling, opts), opts);
}

}  // namespace phlab
