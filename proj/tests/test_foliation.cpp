#include "phlab/foliation/currents.hpp"
#include "phlab/foliation/differential_form.hpp"
#include "phlab/foliation/jacobian.hpp"
#include "phlab/foliation/poly_patch.hpp"
#include "phlab/foliation/unstable_frame.hpp"
#include "phlab/foliation/volume_growth.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace phlab;

namespace {

const IntegerMatrix kCat{{2, 1}, {1, 1}};
const IntegerMatrix kPh3{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};
const double kLambda = (3.0 + std::sqrt(5.0)) / 2.0;
const double kLogLambda = std::log(kLambda);

// Exact unstable eigenvector of the cat map: (1, lambda - 2) normalized.
Vec cat_unstable() {
  Vec u(2);
  u << 1.0, kLambda - 2.0;
  return u.normalized();
}

ToralDiffeo cat_with_sine(double s) {
  Vec coef(2);
  coef << 1.0, 0.0;
  return ToralDiffeo(kCat, TrigPerturbation(2, {{coef, TrigMode{{0, 1}, Phase::Sin}}}, s));
}

// x -> A (x + s' sin(2 pi (x1 + x3)) (1, 0, -1)): a volume-preserving shear followed by A.
ToralDiffeo ph3_perturbed(double s) {
  Vec coef(3);
  coef << 1.0, 0.5, -0.5;
  return ToralDiffeo(kPh3, TrigPerturbation(3, {{coef, TrigMode{{1, 0, 1}, Phase::Sin}}}, s));
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

TrigPolynomial sin_mode(int dim, double amp, std::vector<int> k) { return TrigPolynomial::mode(dim, amp, std::move(k), Phase::Sin); }

DifferentialForm random_one_form(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> f(-2, 2);
  std::vector<FormTerm> terms;
  for (int i = 0; i < 2; ++i) {
    TrigPolynomial c(2, u(rng), {{u(rng), TrigMode{{f(rng), f(rng)}, Phase::Sin}}, {u(rng), TrigMode{{f(rng), f(rng)}, Phase::Cos}}});
    terms.push_back({c, {i}});
  }
  return DifferentialForm(2, 1, std::move(terms));
}

}  // namespace

TEST_CASE("differential forms: validation, evaluation and d") {
  CHECK_THROWS_AS(DifferentialForm(2, 2, {{TrigPolynomial::constant(2, 1.0), {1, 0}}}), std::invalid_argument);
  CHECK_THROWS_AS(DifferentialForm(2, 1, {{TrigPolynomial::constant(2, 1.0), {0, 1}}}), std::invalid_argument);

  Mat t(2, 1);
  t << 0.3, -0.7;
  CHECK(DifferentialForm::basis(2, {1}).evaluate(v2(0.1, 0.2), t) == doctest::Approx(-0.7));

  // d(sin(2 pi x1) / 2 pi) = cos(2 pi x1) dx1
  const auto alpha = DifferentialForm::function(sin_mode(2, 1.0 / kTwoPi, {1, 0}));
  const auto da = alpha.exterior_derivative();
  REQUIRE(da.degree() == 1);
  Mat e1(2, 1);
  e1 << 1.0, 0.0;
  CHECK(da.evaluate(v2(0.1, 0.5), e1) == doctest::Approx(std::cos(kTwoPi * 0.1)));

  // d(f dx1) = -(df/dx2) dx1^dx2 for f = sin(2 pi x2).
  const auto beta = DifferentialForm(2, 1, {{sin_mode(2, 1.0, {0, 1}), {0}}}).exterior_derivative();
  Mat fr(2, 2);
  fr << 1.0, 0.0, 0.0, 1.0;
  CHECK(beta.evaluate(v2(0.0, 0.2), fr) == doctest::Approx(-kTwoPi * std::cos(kTwoPi * 0.2)));

  // d o d = 0 on T^3.
  const auto g = DifferentialForm::function(sin_mode(3, 0.7, {1, 2, -1}) + TrigPolynomial::mode(3, 0.4, {0, 1, 3}, Phase::Cos));
  const auto dd = g.exterior_derivative().exterior_derivative();
  Mat f3 = Mat::Identity(3, 2);
  Vec x3(3);
  x3 << 0.2, 0.4, 0.9;
  CHECK(std::abs(dd.evaluate(x3, f3)) < 1e-9);
}

TEST_CASE("patch volume examples") {
  CHECK(patch_volume(PolyPatch::polyline({v2(0, 0), v2(0.3, 0)})) == doctest::Approx(0.3).epsilon(1e-15));
  const auto sq = PolyPatch::mesh({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}, {{0, 1, 2}, {0, 2, 3}});
  CHECK(patch_volume(sq) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sq.boundary_edges().size() == 4);
}

TEST_CASE("refinement without mapping preserves volume and meets max_edge") {
  const ToralDiffeo id(IntegerMatrix::identity(2));
  const auto line = PolyPatch::polyline({v2(0, 0), v2(0.3, 0.1), v2(0.35, 0.4)});
  const auto fine = iterate_refine(id, line, 0.01);
  CHECK(std::abs(patch_volume(fine) - patch_volume(line)) < 1e-12);
  CHECK(fine.max_edge_length() <= 0.01);

  const auto sq = PolyPatch::mesh({v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)}, {{0, 1, 2}, {0, 2, 3}});
  const auto sq2 = iterate_refine(id, sq, 0.05);
  CHECK(std::abs(patch_volume(sq2) - 1.0) < 1e-12);
  CHECK(sq2.max_edge_length() <= 0.05);
  // Conforming: the boundary of the refined square is still the unit square's perimeter.
  double perimeter = 0.0;
  for (auto [a, b] : sq2.boundary_edges())
    perimeter += (sq2.vertices()[static_cast<std::size_t>(a)] - sq2.vertices()[static_cast<std::size_t>(b)]).norm();
  CHECK(perimeter == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("seeded unstable directions") {
  const ToralDiffeo cat(kCat);
  const auto f = unstable_frame(cat, v2(0.3, 0.6), 1);
  const Vec u = f.basis.col(0);
  CHECK(std::abs(u[0] - 0.850651) < 1e-6);
  CHECK(std::abs(u[1] - 0.525731) < 1e-6);
  CHECK(std::asin(std::min(1.0, std::abs(u[0] * cat_unstable()[1] - u[1] * cat_unstable()[0]))) < 1e-8);

  const auto seg = seed_unstable_disk(cat, TorusPoint{0.3, 0.6}, 0.1, 1);
  CHECK(std::abs(patch_volume(seg) - 0.2) < 1e-6);
  CHECK(seg.max_edge_length() <= kDefaultMaxEdge + 1e-15);

  const auto pert = unstable_frame(cat_with_sine(0.01), v2(0.3, 0.6), 1).basis.col(0);
  const double angle = std::acos(std::min(1.0, std::abs(pert.dot(cat_unstable()))));
  CHECK(angle < 0.05);
  CHECK(angle > 0.0);

  const auto disk = seed_unstable_disk(ToralDiffeo(direct_sum(kCat, kCat)), TorusPoint{0.1, 0.2, 0.3, 0.4}, 0.05, 2);
  CHECK(patch_volume(disk) == doctest::Approx(M_PI * 0.05 * 0.05).epsilon(0.02));
  CHECK(disk.max_edge_length() <= kDefaultMaxEdge + 1e-12);
  CHECK_THROWS_AS(seed_unstable_disk(cat, TorusPoint{0.1, 0.1}, 0.3, 1), std::invalid_argument);
}

TEST_CASE("iterating an unstable segment stretches it by lambda") {
  const ToralDiffeo cat(kCat);
  auto seg = seed_unstable_disk(cat, TorusPoint{0.2, 0.7}, 0.05, 1);
  const double l0 = patch_volume(seg);
  auto img = iterate_refine(cat, seg, 0.02);
  CHECK(std::abs(patch_volume(img) - kLambda * l0) < 1e-9);
  CHECK(img.max_edge_length() <= 0.02);
  for (int i = 0; i < 5; ++i) img = iterate_refine(cat, img, 0.02);
  CHECK(img.max_edge_length() <= 0.02);
  CHECK(patch_volume(img) == doctest::Approx(std::pow(kLambda, 6) * l0).epsilon(1e-9));

  const ToralDiffeo id(IntegerMatrix::identity(2));
  CHECK(std::abs(patch_volume(iterate_refine(id, seg, 0.02)) - l0) < 1e-12);
  CHECK_THROWS_AS(iterate_refine(cat, img, 0.02, 100), BudgetExceeded);
}

TEST_CASE("volume growth estimates") {
  const auto cat = estimate_volume_growth(ToralDiffeo(kCat), TorusPoint{0.3, 0.6}, 0.1, 1, 10);
  CHECK(std::abs(cat.slope - kLogLambda) < 0.01);
  CHECK(cat.r_squared > 0.9999);
  CHECK(cat.n_lo == 5);
  CHECK(cat.log_volumes.size() == 11);

  const auto id = estimate_volume_growth(ToralDiffeo(IntegerMatrix::identity(2)), TorusPoint{0.3, 0.6}, 0.1, 1, 8);
  CHECK(std::abs(id.slope) < 1e-6);
  CHECK_THROWS_AS(estimate_volume_growth(ToralDiffeo(kCat), TorusPoint{0.3, 0.6}, 0.1, 1, 5), std::invalid_argument);

  // Stable growth is the unstable growth of the inverse.
  const auto st = estimate_volume_growth(ToralDiffeo(kCat).inverse(), TorusPoint{0.3, 0.6}, 0.1, 1, 10);
  CHECK(std::abs(st.slope - kLogLambda) < 0.01);

  const auto t4 = estimate_volume_growth(ToralDiffeo(direct_sum(kCat, kCat)), TorusPoint{0.1, 0.2, 0.3, 0.4}, 0.05, 2, 6,
                                         GrowthOptions{0.05, kDefaultVertexBudget, {}});
  CHECK(std::abs(t4.slope - 2.0 * kLogLambda) < 0.02);
}

TEST_CASE("volume growth is independent of base point and radius") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const ToralDiffeo& f : {ToralDiffeo(kPh3), ph3_perturbed(0.01), ph3_perturbed(0.02)}) {
    const double tol = f.is_linear() ? 0.01 : 0.03;
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 5; ++i) {
      const TorusPoint x{u(rng), u(rng), u(rng)};
      for (double r : {0.05, 0.1}) {
        const double s = estimate_volume_growth(f, x, r, 1, 10).slope;
        CHECK(std::abs(s - kLogLambda) < tol);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    }
    CHECK(hi - lo < 0.02);
  }
}

TEST_CASE("currents converge to the unstable direction") {
  const ToralDiffeo cat(kCat);
  PolyPatch last = seed_unstable_disk(cat, TorusPoint{0.3, 0.6}, 0.1, 1);
  iterate_patch(cat, last, 10, {}, [&](int, const PolyPatch& p) { last = p; });
  const auto c1 = evaluate_current(last, DifferentialForm::basis(2, {0}), 10);
  const auto c2 = evaluate_current(last, DifferentialForm::basis(2, {1}), 10);
  CHECK(std::abs(c1.value - 0.850651) < 1e-3);
  CHECK(std::abs(c2.value - 0.525731) < 1e-3);

  const Eigen::VectorXd cls = empirical_class(last);
  CHECK(std::abs(cls[0] - cat_unstable()[0]) < 1e-3);
  CHECK(std::abs(cls[1] - cat_unstable()[1]) < 1e-3);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto w1 = random_one_form(rng), w2 = random_one_form(rng);
    const double a = evaluate_current(last, w1).value, b = evaluate_current(last, w2).value;
    CHECK(std::abs(evaluate_current(last, w1 + w2).value - (a + b)) < 1e-12);
    CHECK(std::abs(a) <= w1.sup_bound());
  }
}

TEST_CASE("closedness defect decays like lambda^-n") {
  const ToralDiffeo cat(kCat);
  const auto alpha = DifferentialForm::function(sin_mode(2, 1.0 / kTwoPi, {1, 0}));
  CHECK(std::abs(closedness_defect(cat, TorusPoint{0.3, 0.6}, 0.1, 8, alpha)) < 1e-2);
  CHECK(closedness_defect(cat, TorusPoint{0.3, 0.6}, 0.1, 8, DifferentialForm::function(TrigPolynomial::constant(2, 2.5))) == 0.0);

  auto all = closedness_defects(cat, TorusPoint{0.3, 0.6}, 0.1, alpha, 10);
  for (const auto& s : all) CHECK(std::abs(s.defect - s.stokes) < 1e-6 * std::max(1.0, std::abs(s.defect)) + 1e-9);
  std::vector<DefectSample> tail(all.begin() + 2, all.end());
  const auto fit = fit_defect_decay(tail);
  CHECK(fit.rho < 0.5);
  for (const auto& s : tail) CHECK(std::abs(s.defect) <= fit.constant * std::pow(fit.rho, s.n) * (1 + 1e-12));
}

TEST_CASE("Stokes cross-check on a surface patch") {
  const ToralDiffeo t4(direct_sum(kCat, kCat));
  const DifferentialForm alpha(4, 1, {{sin_mode(4, 0.3, {1, 0, 1, 0}), {0}}, {TrigPolynomial::mode(4, 0.2, {0, 1, 0, 2}, Phase::Cos), {3}}});
  for (const auto& s : closedness_defects(t4, TorusPoint{0.1, 0.2, 0.3, 0.4}, 0.05, alpha, 3)) {
    CHECK(std::abs(s.defect - s.stokes) < 1e-4 * std::max(1.0, std::abs(s.stokes)));
  }
}

TEST_CASE("jacobian criterion") {
  const auto cat = jacobian_gap(ToralDiffeo(kCat), 1, 2000, 1);
  CHECK(std::abs(cat.min_ratio - 2.618034) < 1e-6);
  CHECK(cat.holds());
  const auto t4 = jacobian_gap(ToralDiffeo(direct_sum(kCat, kCat)), 2, 500, 1);
  CHECK(std::abs(t4.min_ratio - 2.618034) < 1e-6);
  const auto id = jacobian_gap(ToralDiffeo(IntegerMatrix::identity(2)), 1, 100, 1);
  CHECK(id.min_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(id.holds());
  const auto pert = jacobian_gap(cat_with_sine(0.01), 1, 500, 1);
  CHECK(pert.min_ratio > 2.4);
  CHECK(pert.min_ratio < 2.618034);
}
