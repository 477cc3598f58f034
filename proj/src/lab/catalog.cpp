#include "phlab/lab/catalog.hpp"

namespace phlab {
namespace {

const IntegerMatrix kCat{{2, 1}, {1, 1}};
const IntegerMatrix kPh3{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};

Scenario toral(std::string name, std::string description, std::uint64_t seed, IntegerMatrix a) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.seed = seed;
  s.map.kind = MapKind::Toral;
  s.map.matrix = std::move(a);
  s.homology = true;
  s.volume_growth = GrowthParams{};
  s.lyapunov = LyapunovParams{};
  return s;
}

Scenario ph3_family(std::string name, std::string description, std::uint64_t seed, double s_amp) {
  Scenario s = toral(std::move(name), std::move(description), seed, kPh3);
  s.map.center_dim = 1;
  if (s_amp > 0.0) {
    s.map.amplitude = s_amp;
    // A volume-preserving shear along (1, 0, -1) composed with A.
    s.map.terms.push_back({{1.0, 0.5, -0.5}, {1, 0, 1}, Phase::Sin});
    s.tolerances.growth_identity = 0.03;
  }
  s.volume_growth->stable = true;
  s.current = CurrentParams{};
  s.jacobian = JacobianParams{};
  s.entropy = EntropyParams{{0.2, 0.1}, 8, {64, 64, 64}, 0.02, 2};
  // The center coordinate carries no entropy, so the partition ignores it and
  // the coarse alphabet leaves room for long words.
  MeasureEntropyParams m;
  m.partition = {2, 2, 1};
  m.m_max = 12;
  m.plateau_tolerance = 0.005;
  s.measure_entropy = m;
  return s;
}

Scenario skew(std::string name, std::string description, std::uint64_t seed, double eps) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.seed = seed;
  s.map.kind = MapKind::SkewSuspension;
  s.map.matrix = kCat;
  s.map.c = 0.05;
  s.map.epsilon = eps;
  // Flow direction and circle direction.
  s.map.center_dim = 2;
  s.homology = true;
  s.volume_growth = GrowthParams{};
  s.entropy = EntropyParams{{0.3, 0.2}, 8, {128, 128, 16}, 0.02, 2};
  return s;
}

}  // namespace

std::vector<Scenario> builtin_catalog() {
  std::vector<Scenario> out;

  Scenario cat = toral("cat2", "hyperbolic automorphism [[2,1],[1,1]] of the 2-torus", 1, kCat);
  cat.current = CurrentParams{};
  cat.jacobian = JacobianParams{};
  cat.entropy = EntropyParams{};
  cat.measure_entropy = MeasureEntropyParams{};
  out.push_back(cat);

  out.push_back(ph3_family("ph3", "cat map times the identity on the circle, one-dimensional center", 2, 0.0));
  out.push_back(ph3_family("ph3-perturbed-0.01", "ph3 composed with a volume-preserving shear of amplitude 0.01", 3, 0.01));
  out.push_back(ph3_family("ph3-perturbed-0.02", "ph3 composed with a volume-preserving shear of amplitude 0.02", 4, 0.02));

  Scenario t4 = toral("t4-product", "cat map times cat map on the 4-torus, two-dimensional unstable bundle", 5,
                      direct_sum(kCat, kCat));
  t4.map.unstable_dim = 2;
  t4.volume_growth = GrowthParams{2, {0.05}, 6, 0.05, 2'000'000, false};
  t4.jacobian = JacobianParams{};
  t4.entropy = EntropyParams{{0.45, 0.3}, 4, {16, 16, 16, 16}, 0.1, 2};
  MeasureEntropyParams m4;
  m4.partition = {2, 2, 2, 2};
  m4.m_max = 12;
  m4.plateau_tolerance = 0.005;
  t4.measure_entropy = m4;
  out.push_back(t4);

  out.push_back(skew("skew-suspension-0", "suspension of the cat map skewed over the circle map at the saddle-node", 6, 0.0));
  out.push_back(skew("skew-suspension-plus0.005", "skew suspension after the parabolic fixed points annihilate", 7, 0.005));
  out.push_back(skew("skew-suspension-minus0.005", "skew suspension with the parabolic point split in two", 8, -0.005));
  return out;
}

Scenario find_builtin(const std::string& name) {
  for (auto& s : builtin_catalog())
    if (s.name == name) return s;
  std::string known;
  for (const auto& s : builtin_catalog()) known += (known.empty() ? "" : ", ") + s.name;
  throw ScenarioError("unknown builtin scenario \"" + name + "\" (known: " + known + ")");
}

}  // namespace phlab
