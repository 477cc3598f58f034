#include "phlab/foliation/poly_patch.hpp"

#include "phlab/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace phlab {
namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b)), hi = static_cast<std::uint64_t>(std::max(a, b));
  return lo << 32 | hi;
}

double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
  const Vec e1 = b - a, e2 = c - a;
  const double g = e1.squaredNorm() * e2.squaredNorm() - std::pow(e1.dot(e2), 2);
  return 0.5 * std::sqrt(std::max(g, 0.0));
}

[[noreturn]] void over_budget(std::size_t budget) {
  throw BudgetExceeded("patch refinement exceeded the vertex budget of " + std::to_string(budget) + " vertices");
}

void recenter(std::vector<Vec>& v) {
  Vec shift = v.front();
  for (Eigen::Index i = 0; i < shift.size(); ++i) shift[i] = std::floor(shift[i]);
  if (shift.isZero()) return;
  for (auto& p : v) p -= shift;
}

std::vector<Vec> map_all(const ToralDiffeo& f, const std::vector<Vec>& src) {
  std::vector<Vec> out(src.size());
  parallel_for(src.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = f.apply_lift(src[i]);
  });
  return out;
}

// Appends the refined image of the source edge (sa, sb) without its first
// endpoint.
void refine_edge(const ToralDiffeo& f, const Vec& sa, const Vec& fa, const Vec& sb, const Vec& fb, double max_edge,
                 int depth, std::vector<Vec>& out) {
  if ((fb - fa).norm() <= max_edge) {
    out.push_back(fb);
    return;
  }
  if (depth > 60) throw ConvergenceError("edge subdivision did not reach max_edge within 60 bisections");
  const Vec sm = 0.5 * (sa + sb);
  const Vec fm = f.apply_lift(sm);
  refine_edge(f, sa, fa, sm, fm, max_edge, depth + 1, out);
  refine_edge(f, sm, fm, sb, fb, max_edge, depth + 1, out);
}

PolyPatch refine_polyline(const ToralDiffeo& f, const PolyPatch& p, double max_edge, std::size_t budget) {
  const auto& src = p.vertices();
  const std::vector<Vec> img = map_all(f, src);
  const std::size_t edges = src.size() - 1;
  const std::size_t workers = static_cast<std::size_t>(std::max(1, thread_count()));
  const std::size_t chunk = (edges + workers - 1) / workers;
  std::vector<std::vector<Vec>> parts(workers);
  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t b = w * chunk, e = std::min(edges, b + chunk);
      for (std::size_t i = b; i < e; ++i) {
        refine_edge(f, src[i], img[i], src[i + 1], img[i + 1], max_edge, 0, parts[w]);
        if (parts[w].size() > budget) return;
      }
    }
  });
  std::size_t total = 1;
  for (const auto& part : parts) total += part.size();
  if (total > budget) over_budget(budget);
  std::vector<Vec> out;
  out.reserve(total);
  out.push_back(img.front());
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  recenter(out);
  return PolyPatch::polyline(std::move(out));
}

struct MeshRefiner {
  const ToralDiffeo& f;
  double max_edge;
  std::size_t budget;
  std::vector<Vec> src, img;
  std::vector<PolyPatch::Triangle> tris;

  double image_length(int a, int b) const { return (img[static_cast<std::size_t>(a)] - img[static_cast<std::size_t>(b)]).norm(); }

  // Index in 0..2 of the edge (t[i], t[i+1]) of greatest image length; ties
  // go to the smaller edge key so the choice is reproducible.
  int longest_edge(const PolyPatch::Triangle& t) const {
    int best = 0;
    double best_len = -1.0;
    std::uint64_t best_key = 0;
    for (int i = 0; i < 3; ++i) {
      const int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
      const double len = image_length(a, b);
      const std::uint64_t key = edge_key(a, b);
      if (len > best_len || (len == best_len && key < best_key)) {
        best = i;
        best_len = len;
        best_key = key;
      }
    }
    return best;
  }

  static PolyPatch::Triangle rotate(const PolyPatch::Triangle& t, int i) {
    return {t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)], t[static_cast<std::size_t>((i + 2) % 3)]};
  }

  // One pass; returns false when no edge is too long.
  bool pass() {
    std::unordered_map<std::uint64_t, int> mid;  // marked edge -> midpoint vertex (-1 before creation)
    for (const auto& t : tris)
      for (int i = 0; i < 3; ++i) {
        const int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
        if (image_length(a, b) > max_edge) mid.emplace(edge_key(a, b), -1);
      }
    if (mid.empty()) return false;

    // Closure: a triangle with any marked edge also marks its longest edge.
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& t : tris) {
        bool any = false;
        for (int i = 0; i < 3 && !any; ++i)
          any = mid.count(edge_key(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)])) > 0;
        if (!any) continue;
        const auto r = rotate(t, longest_edge(t));
        if (mid.emplace(edge_key(r[0], r[1]), -1).second) changed = true;
      }
    }

    // New vertices in a deterministic order: by first appearance in the triangle list.
    std::vector<std::pair<int, int>> order;
    for (const auto& t : tris)
      for (int i = 0; i < 3; ++i) {
        const int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
        auto it = mid.find(edge_key(a, b));
        if (it != mid.end() && it->second < 0) {
          it->second = static_cast<int>(src.size() + order.size());
          order.emplace_back(a, b);
        }
      }
    if (src.size() + order.size() > budget) over_budget(budget);
    const std::size_t base = src.size();
    src.resize(base + order.size());
    img.resize(base + order.size());
    parallel_for(order.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        src[base + i] = 0.5 * (src[static_cast<std::size_t>(order[i].first)] + src[static_cast<std::size_t>(order[i].second)]);
        img[base + i] = f.apply_lift(src[base + i]);
      }
    });

    auto midpoint = [&](int a, int b) {
      auto it = mid.find(edge_key(a, b));
      return it == mid.end() ? -1 : it->second;
    };
    std::vector<PolyPatch::Triangle> next;
    next.reserve(tris.size() * 2);
    for (const auto& t : tris) {
      const auto r = rotate(t, longest_edge(t));
      const int m = midpoint(r[0], r[1]);
      if (m < 0) {
        next.push_back(t);
        continue;
      }
      // Children (p0, m, p2) and (m, p1, p2); each may split its remaining original edge.
      const int q0 = midpoint(r[2], r[0]);
      if (q0 < 0) {
        next.push_back({r[0], m, r[2]});
      } else {
        next.push_back({r[0], m, q0});
        next.push_back({m, r[2], q0});
      }
      const int q1 = midpoint(r[1], r[2]);
      if (q1 < 0) {
        next.push_back({m, r[1], r[2]});
      } else {
        next.push_back({m, r[1], q1});
        next.push_back({m, q1, r[2]});
      }
    }
    tris = std::move(next);
    return true;
  }
};

}  // namespace

PolyPatch::PolyPatch(int degree, std::vector<Vec> vertices, std::vector<Triangle> triangles)
    : degree_(degree), vertices_(std::move(vertices)), triangles_(std::move(triangles)) {}

PolyPatch PolyPatch::polyline(std::vector<Vec> points) {
  if (points.size() < 2) throw std::invalid_argument("a polyline needs at least two points");
  return PolyPatch(1, std::move(points), {});
}

PolyPatch PolyPatch::mesh(std::vector<Vec> vertices, std::vector<Triangle> triangles) {
  if (vertices.size() < 3 || triangles.empty()) throw std::invalid_argument("a mesh needs at least one triangle");
  for (const auto& t : triangles)
    for (int v : t)
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size()) throw std::invalid_argument("triangle vertex out of range");
  return PolyPatch(2, std::move(vertices), std::move(triangles));
}

double PolyPatch::max_edge_length() const {
  double m = 0.0;
  if (degree_ == 1) {
    for (std::size_t i = 1; i < vertices_.size(); ++i) m = std::max(m, (vertices_[i] - vertices_[i - 1]).norm());
  } else {
    for (const auto& t : triangles_)
      for (int i = 0; i < 3; ++i)
        m = std::max(m, (vertices_[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])] -
                         vertices_[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 1) % 3)])])
                            .norm());
  }
  return m;
}

std::vector<std::pair<int, int>> PolyPatch::boundary_edges() const {
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : triangles_)
    for (int i = 0; i < 3; ++i) ++count[edge_key(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)])];
  std::vector<std::pair<int, int>> out;
  for (const auto& t : triangles_)
    for (int i = 0; i < 3; ++i) {
      const int a = t[static_cast<std::size_t>(i)], b = t[static_cast<std::size_t>((i + 1) % 3)];
      if (count[edge_key(a, b)] == 1) out.emplace_back(a, b);
    }
  return out;
}

double patch_volume(const PolyPatch& patch) {
  const auto& v = patch.vertices();
  if (patch.degree() == 1) {
    return parallel_sum(v.size() - 1, [&](std::size_t b, std::size_t e) {
      double s = 0.0;
      for (std::size_t i = b; i < e; ++i) s += (v[i + 1] - v[i]).norm();
      return s;
    });
  }
  const auto& t = patch.triangles();
  return parallel_sum(t.size(), [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i)
      s += triangle_area(v[static_cast<std::size_t>(t[i][0])], v[static_cast<std::size_t>(t[i][1])],
                         v[static_cast<std::size_t>(t[i][2])]);
    return s;
  });
}

PolyPatch iterate_refine(const ToralDiffeo& map, const PolyPatch& patch, double max_edge, std::size_t vertex_budget) {
  if (!(max_edge > 0.0)) throw std::invalid_argument("max_edge must be positive");
  if (patch.dim() != map.dim()) throw std::invalid_argument("patch and map dimensions differ");
  if (patch.degree() == 1) return refine_polyline(map, patch, max_edge, vertex_budget);

  MeshRefiner r{map, max_edge, vertex_budget, patch.vertices(), map_all(map, patch.vertices()), patch.triangles()};
  while (r.pass()) {
  }
  recenter(r.img);
  return PolyPatch::mesh(std::move(r.img), std::move(r.tris));
}

}  // namespace phlab
