#include "phlab/foliation/unstable_frame.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace phlab {
namespace {

Mat orthonormalize(const Mat& m) {
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ() * Mat::Identity(m.rows(), m.cols());
  return q;
}

Mat push(const ToralDiffeo& f, const std::vector<Vec>& orbit, std::size_t from, Mat frame) {
  for (std::size_t i = from; i < orbit.size() - 1; ++i) frame = orthonormalize(f.differential(orbit[i]) * frame);
  return frame;
}

}  // namespace

UnstableFrame unstable_frame(const ToralDiffeo& map, const Vec& x, int k, const FrameOptions& opts) {
  const int n = map.dim();
  if (k < 1 || k > n) throw std::invalid_argument("frame dimension must satisfy 1 <= k <= dim");
  if (opts.warmup < 4) throw std::invalid_argument("frame warm-up must be at least 4 iterates");

  // orbit[0] = x_{-N}, ..., orbit[N] = x.
  const auto N = static_cast<std::size_t>(opts.warmup);
  std::vector<Vec> orbit(N + 1);
  orbit[N] = x;
  for (std::size_t i = N; i > 0; --i) orbit[i - 1] = map.invert_lift(orbit[i]);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g;
  Mat start(n, k);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < n; ++r) start(r, c) = g(rng);
  start = orthonormalize(start);

  Mat full = push(map, orbit, 0, start);
  const Mat part = push(map, orbit, N / 4, start);
  const double drift = ((Mat::Identity(n, n) - full * full.transpose()) * part).norm();
  if (!(drift <= opts.tolerance)) {
    throw ConvergenceError("unstable frame did not settle: drift " + std::to_string(drift) + " after " +
                           std::to_string(opts.warmup) + " iterates (is the map partially hyperbolic at this strength?)");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(full(i, 0)) > 1e-12) {
      if (full(i, 0) < 0) full.col(0) *= -1.0;
      break;
    }
  }
  return {full, drift};
}

namespace {

// Rings j = 1..R of 6j vertices each; consecutive rings are stitched by a
// merge walk on the angle, giving counter-clockwise triangles in (u1, u2).
PolyPatch ring_disk(const Vec& c, const Mat& u, double r, int rings) {
  std::vector<Vec> verts{c};
  std::vector<PolyPatch::Triangle> tris;
  std::vector<int> prev{0};
  for (int j = 1; j <= rings; ++j) {
    const int m = 6 * j;
    const double rad = r * j / rings;
    std::vector<int> ring;
    for (int i = 0; i < m; ++i) {
      const double th = kTwoPi * i / m;
      ring.push_back(static_cast<int>(verts.size()));
      verts.push_back(c + rad * (std::cos(th) * u.col(0) + std::sin(th) * u.col(1)));
    }
    const int pm = static_cast<int>(prev.size());
    if (pm == 1) {
      for (int i = 0; i < m; ++i) tris.push_back({prev[0], ring[static_cast<std::size_t>(i)], ring[static_cast<std::size_t>((i + 1) % m)]});
    } else {
      int a = 0, b = 0;
      while (a < pm || b < m) {
        const double ta = static_cast<double>(a + 1) / pm, tb = static_cast<double>(b + 1) / m;
        const int pa = prev[static_cast<std::size_t>(a % pm)], rb = ring[static_cast<std::size_t>(b % m)];
        if (b < m && (a >= pm || tb <= ta)) {
          tris.push_back({pa, rb, ring[static_cast<std::size_t>((b + 1) % m)]});
          ++b;
        } else {
          tris.push_back({pa, rb, prev[static_cast<std::size_t>((a + 1) % pm)]});
          ++a;
        }
      }
    }
    prev = std::move(ring);
  }
  return PolyPatch::mesh(std::move(verts), std::move(tris));
}

}  // namespace

PolyPatch seed_unstable_disk(const ToralDiffeo& map, const TorusPoint& x, double r, int k, double max_edge,
                             const FrameOptions& opts) {
  if (k != 1 && k != 2) throw std::invalid_argument("disk dimension must be 1 or 2");
  if (!(r > 0.0) || r > 0.25) throw std::invalid_argument("disk radius must lie in (0, 0.25]");
  if (!(max_edge > 0.0)) throw std::invalid_argument("max_edge must be positive");
  const Vec c = x.coords();
  const Mat u = unstable_frame(map, c, k, opts).basis;

  if (k == 1) {
    const int m = static_cast<int>(std::ceil(2.0 * r / max_edge));
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(m + 1));
    for (int i = 0; i <= m; ++i) pts.push_back(c + (-r + 2.0 * r * i / m) * u.col(0));
    return PolyPatch::polyline(std::move(pts));
  }

  for (int rings = static_cast<int>(std::ceil(r / max_edge));; ++rings) {
    PolyPatch disk = ring_disk(c, u, r, rings);
    if (disk.max_edge_length() <= max_edge) return disk;
  }
}

}  // namespace phlab
