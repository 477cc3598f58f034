#pragma once

#include "phlab/core/toral_diffeo.hpp"
#include "phlab/core/types.hpp"

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace phlab {

inline constexpr std::size_t kDefaultVertexBudget = 2'000'000;
inline constexpr double kDefaultMaxEdge = 0.02;

/// A piece of leaf in the lift R^n: a polyline (degree 1) or an oriented
/// triangle mesh (degree 2). Vertices are lifted coordinates, so every edge
/// is the straight chord between its two stored endpoints.
class PolyPatch {
 public:
  using Triangle = std::array<int, 3>;

  static PolyPatch polyline(std::vector<Vec> points);
  static PolyPatch mesh(std::vector<Vec> vertices, std::vector<Triangle> triangles);

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(vertices_.front().size()); }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::size_t vertex_count() const { return vertices_.size(); }

  /// Longest lifted edge.
  double max_edge_length() const;
  /// Oriented boundary edges (tail, head) of a mesh, in triangle order.
  std::vector<std::pair<int, int>> boundary_edges() const;

 private:
  PolyPatch(int degree, std::vector<Vec> vertices, std::vector<Triangle> triangles);
  int degree_ = 1;
  std::vector<Vec> vertices_;
  std::vector<Triangle> triangles_;
};

/// Sum of lifted chord lengths (degree 1) or triangle areas (degree 2).
double patch_volume(const PolyPatch& patch);

/// Maps every vertex on the lift, then subdivides until all lifted edges
/// are <= max_edge. A long edge is split by mapping the midpoint of its
/// source edge; triangles are refined by longest-edge bisection, so the
/// mesh stays conforming. The result is translated by an integer vector so
/// that its first vertex lies in [0,1)^n.
/// Throws BudgetExceeded when the vertex count would pass vertex_budget.
PolyPatch iterate_refine(const ToralDiffeo& map, const PolyPatch& patch, double max_edge = kDefaultMaxEdge,
                         std::size_t vertex_budget = kDefaultVertexBudget);

}  // namespace phlab
