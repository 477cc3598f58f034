#include "phlab/core/parallel.hpp"
#include "phlab/lyapunov/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace phlab;

namespace {

const IntegerMatrix kCat{{2, 1}, {1, 1}};
const IntegerMatrix kPh3{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};
const double kLogGolden = std::log((3.0 + std::sqrt(5.0)) / 2.0);

ToralDiffeo ph3_perturbed(double s) {
  Vec coef(3);
  coef << 1.0, 0.5, -0.5;
  return ToralDiffeo(kPh3, TrigPerturbation(3, {{coef, TrigMode{{1, 0, 1}, Phase::Sin}}}, s));
}

ToralDiffeo rotation(double theta) {
  Vec coef(1);
  coef << 1.0;
  return ToralDiffeo(IntegerMatrix{{1}}, TrigPerturbation(1, {{coef, TrigMode{{0}, Phase::Cos}}}, theta));
}

Vec point(std::initializer_list<double> v) {
  Vec x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

// Independent route for linear maps: log eigenvalue moduli, descending.
std::vector<double> log_moduli(const IntegerMatrix& a) {
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(a.to_real(), false).eigenvalues();
  std::vector<double> out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(std::log(std::abs(ev[i])));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

TEST_CASE("linear spectra equal log eigenvalue moduli") {
  const auto cat = lyapunov_spectrum(ToralDiffeo(kCat), point({0.1, 0.37}), 10000);
  REQUIRE(cat.exponents.size() == 2);
  CHECK(std::abs(cat.exponents[0] - 0.962424) < 1e-6);
  CHECK(std::abs(cat.exponents[1] + 0.962424) < 1e-6);
  const auto cat_oracle = log_moduli(kCat);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(cat.exponents[i] - cat_oracle[i]) < 1e-8);
  CHECK(std::abs(cat.exponents[0] - kLogGolden) < 1e-8);

  const auto ph3 = lyapunov_spectrum(ToralDiffeo(kPh3), point({0.3, 0.1, 0.8}), 10000);
  const auto ph3_oracle = log_moduli(kPh3);
  REQUIRE(ph3.exponents.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ph3.exponents[i] - ph3_oracle[i]) < 1e-8);
  CHECK(std::abs(ph3.exponents[1]) < 1e-6);
  CHECK(ph3.max_gap() < 1e-8);

  const auto t4 = lyapunov_spectrum(ToralDiffeo(direct_sum(kCat, kCat)), point({0.1, 0.2, 0.3, 0.4}), 10000);
  const auto t4_oracle = log_moduli(direct_sum(kCat, kCat));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(t4.exponents[i] - t4_oracle[i]) < 1e-8);
}

TEST_CASE("rotation has zero exponent") {
  const auto r = lyapunov_spectrum(rotation(0.1234), point({0.5}), 1000);
  REQUIRE(r.exponents.size() == 1);
  CHECK(r.exponents[0] == 0.0);
}

TEST_CASE("volume-preserving maps have zero exponent sum") {
  for (double s : {0.0, 0.01, 0.02}) {
    const auto sp = lyapunov_spectrum(ph3_perturbed(s), point({0.21, 0.67, 0.05}), 20000);
    CHECK(std::abs(sp.sum()) < 1e-6);
  }
  CHECK(std::abs(lyapunov_spectrum(ToralDiffeo(kCat), point({0.4, 0.9}), 5000).sum()) < 1e-6);
}

TEST_CASE("inverse spectrum is the reversed negative on the same orbit") {
  for (double s : {0.0, 0.02}) {
    const ToralDiffeo f = ph3_perturbed(s);
    const Vec x = point({0.13, 0.58, 0.91});
    const long n = 100000;
    const auto fwd = lyapunov_spectrum(f, x, n);
    const auto bwd = inverse_spectrum_on_orbit(f, x, n);
    REQUIRE(bwd.exponents.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(bwd.exponents[i] + fwd.exponents[2 - i]) < 1e-5);
  }
  const auto cat_inv = lyapunov_spectrum(ToralDiffeo(kCat).inverse(), point({0.3, 0.2}), 10000);
  CHECK(std::abs(cat_inv.exponents[0] - kLogGolden) < 1e-8);
  CHECK(std::abs(cat_inv.exponents[1] + kLogGolden) < 1e-8);
}

TEST_CASE("perturbed center exponent stays near zero") {
  const Vec x = point({0.31, 0.77, 0.42});
  const auto base = lyapunov_spectrum(ph3_perturbed(0.0), x, 50000);
  for (double s : {0.01, 0.02}) {
    const auto sp = lyapunov_spectrum(ph3_perturbed(s), x, 50000);
    CHECK(sp.exponents[1] > -0.05);
    CHECK(sp.exponents[1] < 0.05);
    CHECK(std::abs(sp.exponents[0] - base.exponents[0]) < 0.05);
    CHECK(sp.max_gap() < 0.01);
  }
}

TEST_CASE("convergence gap compares N with N/2") {
  const auto sp = lyapunov_spectrum(ph3_perturbed(0.02), point({0.2, 0.4, 0.6}), 4000);
  REQUIRE(sp.convergence_gap.size() == 3);
  for (double g : sp.convergence_gap) CHECK(g >= 0.0);
  CHECK(sp.max_gap() > 0.0);
  CHECK(sp.iterates == 4000);
}

TEST_CASE("block re-orthonormalization matches and overflow is reported") {
  const ToralDiffeo cat(kCat);
  LyapunovOptions opts;
  opts.reorth_every = 5;
  const auto sp = lyapunov_spectrum(cat, point({0.1, 0.2}), 10000, opts);
  CHECK(std::abs(sp.exponents[0] - kLogGolden) < 1e-6);
  CHECK(std::abs(sp.exponents[1] + kLogGolden) < 1e-6);

  opts.reorth_every = 800;
  CHECK_THROWS_AS(lyapunov_spectrum(cat, point({0.1, 0.2}), 10000, opts), std::overflow_error);
  opts.reorth_every = 40;  // the contracting direction drops below roundoff
  CHECK_THROWS_AS(lyapunov_spectrum(cat, point({0.1, 0.2}), 10000, opts), std::overflow_error);
  CHECK_THROWS_AS(lyapunov_spectrum(cat, point({0.1, 0.2}), 999), std::invalid_argument);
  CHECK_THROWS_AS(lyapunov_spectrum(cat, point({0.1, 0.2, 0.3}), 1000), std::invalid_argument);
}

TEST_CASE("ensemble is independent of the thread count") {
  const ToralDiffeo f = ph3_perturbed(0.01);
  const int saved = thread_count();
  set_thread_count(1);
  const auto a = lyapunov_ensemble(f, 6, 2000, 17);
  set_thread_count(4);
  const auto b = lyapunov_ensemble(f, 6, 2000, 17);
  set_thread_count(saved);
  REQUIRE(a.orbits.size() == 6);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.mean[i] == b.mean[i]);
    CHECK(a.spread[i] == b.spread[i]);
  }
  CHECK(a.spread[0] < 0.05);
}

TEST_CASE("classification into bands") {
  const auto bands = ExponentBands::from_constants(PHConstants::from_linear(kPh3));
  CHECK(bands.lower() == doctest::Approx(-0.1));
  CHECK(bands.upper() == doctest::Approx(0.1));

  const auto ph3 = lyapunov_spectrum(ToralDiffeo(kPh3), point({0.3, 0.1, 0.8}), 10000);
  const auto c = classify_exponents(ph3.exponents, bands);
  REQUIRE(c.stable.size() == 1);
  REQUIRE(c.center.size() == 1);
  REQUIRE(c.unstable.size() == 1);
  CHECK(c.stable[0] == doctest::Approx(-0.962).epsilon(1e-3));
  CHECK(c.unstable[0] == doctest::Approx(0.962).epsilon(1e-3));
  CHECK(c.center_term == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(c.ambiguous);

  const auto zeros = classify_exponents({0.0, 0.0, 0.0}, bands);
  CHECK(zeros.center.size() == 3);
  CHECK(zeros.center_term == 0.0);

  const auto edge = classify_exponents({0.0995, 0.2, -0.5}, bands);
  CHECK(edge.ambiguous);
  CHECK(edge.center.size() == 1);
  CHECK(edge.center_term == doctest::Approx(0.0995));
  CHECK(edge.unstable.size() == 1);
  CHECK(edge.stable.size() == 1);

  CHECK_THROWS_AS(ExponentBands(0.1, -0.1), std::invalid_argument);
}

TEST_CASE("refined margin") {
  CHECK(refined_pesin_ruelle_check(0.0, 0.0, 0.0) == 0.0);
  CHECK(std::abs(refined_pesin_ruelle_check(0.96, 0.0, 0.962)) < 0.1);
  CHECK(refined_pesin_ruelle_check(1.5, 0.0, 0.962) < -0.05);
}
