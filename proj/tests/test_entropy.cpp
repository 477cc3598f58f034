#include "phlab/core/types.hpp"
#include "phlab/entropy/dynamics.hpp"
#include "phlab/entropy/measure_entropy.hpp"
#include "phlab/entropy/separated.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace phlab;

namespace {

const IntegerMatrix kCat{{2, 1}, {1, 1}};
const IntegerMatrix kPh3{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};
const double kLogLambda = std::log((3.0 + std::sqrt(5.0)) / 2.0);

std::vector<double> shuffled_grid(const std::vector<int>& res, std::uint64_t seed) {
  auto s = grid_sample(res, true, seed);
  shuffle_points(s, res.size(), seed + 1);
  return s;
}

std::vector<State> orbit(const Dynamics& dyn, const double* x, int n) {
  std::vector<State> out(static_cast<std::size_t>(n) + 1);
  std::copy(x, x + dyn.state_dim(), out[0].begin());
  for (int t = 0; t < n; ++t) dyn.step(out[static_cast<std::size_t>(t)].data(), out[static_cast<std::size_t>(t) + 1].data());
  return out;
}

double bowen_distance(const Dynamics& dyn, const std::vector<State>& a, const std::vector<State>& b) {
  double d = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) d = std::max(d, dyn.distance(a[t].data(), b[t].data()));
  return d;
}

// Independent route: plain quadratic greedy over double-precision orbits.
std::size_t brute_greedy(const Dynamics& dyn, const std::vector<double>& sample, int n, double eps) {
  const auto d = static_cast<std::size_t>(dyn.state_dim());
  std::vector<std::vector<State>> kept;
  for (std::size_t p = 0; p * d < sample.size(); ++p) {
    auto o = orbit(dyn, sample.data() + p * d, n);
    bool separated = true;
    for (const auto& k : kept) {
      if (bowen_distance(dyn, o, k) < eps) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(std::move(o));
  }
  return kept.size();
}

// Upper bound on any (n, eps)-separated subset: the eps/2 Bowen balls around
// its points are disjoint, so it has at most N / (smallest ball population).
double packing_bound(const Dynamics& dyn, const std::vector<double>& sample, int n, double eps) {
  const auto d = static_cast<std::size_t>(dyn.state_dim());
  const std::size_t count = sample.size() / d;
  std::vector<std::vector<State>> orbits;
  for (std::size_t p = 0; p < count; ++p) orbits.push_back(orbit(dyn, sample.data() + p * d, n));
  std::size_t smallest = count;
  for (std::size_t p = 0; p < count; ++p) {
    std::size_t pop = 0;
    for (std::size_t q = 0; q < count; ++q)
      if (bowen_distance(dyn, orbits[p], orbits[q]) < eps / 2.0) ++pop;
    smallest = std::min(smallest, pop);
  }
  return static_cast<double>(count) / static_cast<double>(smallest);
}

void check_monotone(const SeparatedSetTable& t) {
  for (std::size_t e = 0; e < t.eps.size(); ++e) {
    for (int n = 1; n <= t.computed(e); ++n) CHECK(t.at(e, n) >= t.at(e, n - 1));
    if (e == 0) continue;
    for (int n = 0; n <= std::min(t.computed(e), t.computed(e - 1)); ++n) CHECK(t.at(e, n) >= t.at(e - 1, n));
  }
}

}  // namespace

TEST_CASE("hashed greedy count matches a quadratic greedy") {
  const auto sample2 = shuffled_grid({24, 24}, 3);
  ToralDynamics cat{ToralDiffeo(kCat)};
  ToralDynamics cat_inv{ToralDiffeo(kCat).inverse()};
  for (double eps : {0.3, 0.15, 0.07}) {
    for (int n : {0, 1, 3}) {
      CHECK(count_separated(cat, n, eps, sample2) == brute_greedy(cat, sample2, n, eps));
      CHECK(count_separated(cat_inv, n, eps, sample2) == brute_greedy(cat_inv, sample2, n, eps));
    }
  }
  const auto sample3 = shuffled_grid({10, 10, 8}, 5);
  for (double tau : {0.7, 1.0, 2.0}) {
    SuspensionTimeMap flow(SuspensionFlow(kCat), tau);
    for (double eps : {0.3, 0.15}) {
      for (int n : {0, 2}) CHECK(count_separated(flow, n, eps, sample3) == brute_greedy(flow, sample3, n, eps));
    }
  }
  const auto ph3_sample = shuffled_grid({8, 8, 8}, 9);
  ToralDynamics ph3{ToralDiffeo(kPh3)};
  CHECK(count_separated(ph3, 2, 0.2, ph3_sample) == brute_greedy(ph3, ph3_sample, 2, 0.2));
}

TEST_CASE("identity packing does not depend on n") {
  ToralDynamics id{ToralDiffeo(IntegerMatrix::identity(2))};
  const auto sample = shuffled_grid({64, 64}, 1);
  const std::size_t s0 = count_separated(id, 0, 0.1, sample);
  CHECK(s0 == brute_greedy(id, sample, 0, 0.1));
  for (int n = 1; n <= 6; ++n) CHECK(count_separated(id, n, 0.1, sample) == s0);

  const auto est = estimate_topological_entropy(id, {0.2, 0.1}, 8, shuffled_grid({128, 128}, 2));
  CHECK(est.h_hat <= 0.02);
}

TEST_CASE("circle rotation count is bounded by ceil(1/eps)") {
  CircleRotation rot(std::sqrt(2.0) - 1.0);
  const auto sample = shuffled_grid({4000}, 4);
  for (double eps : {0.2, 0.1, 0.03}) {
    for (int n : {0, 5, 20}) CHECK(count_separated(rot, n, eps, sample) <= static_cast<std::size_t>(std::ceil(1.0 / eps)));
  }
  const auto est = estimate_topological_entropy(rot, {0.1, 0.05}, 10, sample);
  CHECK(est.h_hat == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cat map log-count increments approach log lambda") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const auto est = estimate_topological_entropy(cat, {0.2, 0.1}, 8, shuffled_grid({256, 256}, 7));
  check_monotone(est.table);
  const auto& r = est.h_of_eps[1];
  REQUIRE(r.usable());
  for (int n = r.n_lo + 1; n <= r.n_hi; ++n) {
    const double inc = std::log(static_cast<double>(est.table.at(1, n)) / static_cast<double>(est.table.at(1, n - 1)));
    CHECK(std::abs(inc - kLogLambda) < 0.08);
  }
  CHECK(std::abs(est.h_hat - kLogLambda) < 0.06);
}

TEST_CASE("greedy count is within a factor two of the packing bound") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const auto sample = grid_sample({64, 64});
  const double eps = 0.2;
  std::vector<double> ns, greedy_log, bound_log;
  for (int n = 0; n <= 4; ++n) {
    const auto g = static_cast<double>(count_separated(cat, n, eps, sample));
    const double u = packing_bound(cat, sample, n, eps);
    CHECK(g >= 0.5 * u);
    CHECK(g <= u);
    ns.push_back(n);
    greedy_log.push_back(std::log(g));
    bound_log.push_back(std::log(u));
  }
  const double rate_g = (greedy_log[4] - greedy_log[1]) / 3.0;
  const double rate_u = (bound_log[4] - bound_log[1]) / 3.0;
  CHECK(std::abs(rate_g - rate_u) < 0.05);
}

TEST_CASE("saturation and ladder errors") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const auto coarse = shuffled_grid({16, 16}, 1);
  CHECK_THROWS_AS(estimate_topological_entropy(cat, {0.02, 0.01}, 6, coarse), PreconditionError);
  try {
    estimate_topological_entropy(cat, {0.02, 0.01}, 6, coarse);
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("all eps saturated") != std::string::npos);
  }
  CHECK_THROWS_AS(estimate_topological_entropy(cat, {0.1, 0.2}, 6, coarse), std::invalid_argument);
  CHECK_THROWS_AS(estimate_topological_entropy(cat, {0.1, 0.1}, 6, coarse), std::invalid_argument);
  CHECK_THROWS_AS(count_separated(cat, 2, 0.0, coarse), std::invalid_argument);
}

TEST_CASE("saturated rows stop just past the saturation level") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const auto sample = shuffled_grid({64, 64}, 3);
  const EntropyOptions opts;
  const auto t = separated_table(cat, {0.2, 0.1}, 8, sample, "64x64", opts);
  const auto limit = static_cast<std::size_t>(std::floor(opts.saturation_fraction * 4096.0));
  for (std::size_t e = 0; e < 2; ++e) {
    if (t.truncated[e]) {
      CHECK(t.counts[e].back() == limit + 1);
    } else {
      CHECK(t.computed(static_cast<std::size_t>(e)) == 8);
    }
    for (int n = 0; n < t.computed(e); ++n) CHECK(t.at(e, n) <= limit);
  }
  check_monotone(t);
  CHECK(t.sampling == "64x64");
}

TEST_CASE("time-2 counts track time-1 counts at twice the length") {
  SuspensionFlow flow(kCat);
  SuspensionTimeMap one(flow, 1.0), two(flow, 2.0);
  const auto sample = shuffled_grid({48, 48, 12}, 11);
  const OrbitBank bank_one(one, sample, 4), bank_two(two, sample, 2);
  for (int n = 1; n <= 2; ++n) {
    const auto a = static_cast<double>(count_separated(two, bank_two, n, 0.3));
    const auto b = static_cast<double>(count_separated(one, bank_one, 2 * n, 0.3));
    CHECK(a <= b);
    CHECK(a >= 0.85 * b);
  }
}

TEST_CASE("entropy of the inverse agrees") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  ToralDynamics inv{ToralDiffeo(kCat).inverse()};
  const auto sample = shuffled_grid({256, 256}, 5);
  const double h = estimate_topological_entropy(cat, {0.2, 0.1}, 8, sample).h_hat;
  const double hi = estimate_topological_entropy(inv, {0.2, 0.1}, 8, sample).h_hat;
  CHECK(std::abs(h - hi) < 0.1);
}

TEST_CASE("grid partition indexing") {
  GridPartition p({4, 3});
  CHECK(p.cell_count() == 12);
  const double a[2] = {0.0, 0.0}, b[2] = {0.99, 0.99}, c[2] = {0.26, 0.34};
  CHECK(p.cell_of(a) == 0);
  CHECK(p.cell_of(b) == 11);
  CHECK(p.cell_of(c) == 1 * 3 + 1);
  CHECK_THROWS_AS(GridPartition({0, 2}), std::invalid_argument);
}

TEST_CASE("block entropies of known sequences") {
  std::vector<std::uint32_t> periodic;
  for (int i = 0; i < 3000; ++i) periodic.push_back(static_cast<std::uint32_t>(i % 3));
  const auto hp = block_entropies(periodic, 4);
  for (double h : hp) CHECK(h == doctest::Approx(std::log(3.0)).epsilon(1e-6));

  std::mt19937_64 rng(1);
  std::vector<std::uint32_t> coin(400000);
  for (auto& c : coin) c = static_cast<std::uint32_t>(rng() & 1U);
  const auto hc = block_entropies(coin, 3);
  for (std::size_t k = 0; k < hc.size(); ++k) CHECK(hc[k] == doctest::Approx((k + 1) * std::log(2.0)).epsilon(1e-3));
}

TEST_CASE("measure entropy of toral maps") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const auto e = estimate_measure_entropy(cat, GridPartition({64, 64}), 10'000'000, 1000, 42);
  CHECK(std::abs(e.h - 0.96) < 0.1);
  for (std::size_t i = 1; i < e.conditional.size(); ++i) CHECK(e.conditional[i].value <= e.conditional[i - 1].value + 1e-9);

  ToralDynamics id{ToralDiffeo(IntegerMatrix::identity(2))};
  const auto z = estimate_measure_entropy(id, GridPartition({64, 64}), 100'000, 10, 1);
  CHECK(z.h == 0.0);
  CHECK(z.conditional.front().distinct_words == 1);
  CHECK_FALSE(z.biased_low);

  ToralDynamics ph3{ToralDiffeo(kPh3)};
  const auto p = estimate_measure_entropy(ph3, GridPartition({16, 16, 16}), 10'000'000, 1000, 7);
  CHECK(std::abs(p.h - 0.96) < 0.1);
}

TEST_CASE("measure entropy flags undersampled words") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const auto e = estimate_measure_entropy(cat, GridPartition({64, 64}), 200'000, 100, 3);
  CHECK(e.biased_low);
  CHECK(e.conditional.back().rare_mass > 0.01);
  CHECK_THROWS_AS(estimate_measure_entropy(cat, GridPartition({4, 4, 4}), 1000, 0, 1), std::invalid_argument);
}

TEST_CASE("a few rare words do not flag the estimate") {
  // The slow center drift creates rare boundary words carrying little mass.
  Vec coef(3);
  coef << 1.0, 0.5, -0.5;
  ToralDynamics dyn{ToralDiffeo(kPh3, TrigPerturbation(3, {{coef, TrigMode{{1, 0, 1}, Phase::Sin}}}, 0.02))};
  const auto e = estimate_measure_entropy(dyn, GridPartition({4, 4, 4}), 4'000'000, 1000, 11);
  REQUIRE(e.conditional.size() >= 3);
  CHECK(e.conditional[1].rarest_word_count < 10);
  CHECK_FALSE(e.conditional[1].undersampled);
  CHECK(e.conditional[1].rare_mass <= 0.01);
  CHECK(e.h < 1.1);
}

TEST_CASE("measure entropy does not exceed topological entropy") {
  ToralDynamics cat{ToralDiffeo(kCat)};
  const double h_top = estimate_topological_entropy(cat, {0.2, 0.1}, 8, shuffled_grid({256, 256}, 9)).h_hat;
  const double h_nu = estimate_measure_entropy(cat, GridPartition({4, 4}), 10'000'000, 1000, 9).h;
  CHECK(h_nu <= h_top + 0.1);
}
