#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace sstokes {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;

enum class BcMode { Periodic, Dirichlet };

/// Boundary flags, OR-ed together for corner vertices.
namespace boundary {
inline constexpr std::uint8_t kInterior = 0;
inline constexpr std::uint8_t kLeft = 1;
inline constexpr std::uint8_t kRight = 2;
inline constexpr std::uint8_t kBottom = 4;
inline constexpr std::uint8_t kTop = 8;
}  // namespace boundary

struct Edge {
  std::array<int, 2> v;
  Point mid;
  std::uint8_t tags = boundary::kInterior;
};

/// Structured triangulation of the unit square.
///
/// Each of the m x m square cells is split along its (0,0)-(1,1) diagonal into
/// a lower triangle (v00, v10, v11) and an upper triangle (v00, v11, v01), both
/// counterclockwise. Vertices are numbered row-major, v(i, j) = j * (m + 1) + i.
/// Local edge e of a triangle joins local vertices e and (e + 1) % 3, which is
/// the ordering used by the quadratic element's midpoint nodes.
class TriMesh {
 public:
  /// Requires m >= 2; throws std::invalid_argument otherwise.
  static TriMesh build_uniform(int m, BcMode mode);

  int cells_per_side() const { return m_; }
  double h() const { return 1.0 / m_; }
  BcMode bc_mode() const { return mode_; }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& triangle_edges() const { return triangle_edges_; }
  std::uint8_t vertex_tags(int v) const { return vertex_tags_[v]; }

  int vertex_index(int i, int j) const { return j * (m_ + 1) + i; }

  double signed_area(int t) const;

  /// Triangle containing p (points on shared edges resolve to one neighbour).
  int locate(const Point& p) const;

  /// Barycentric coordinates of p with respect to triangle t.
  std::array<double, 3> barycentric(int t, const Point& p) const;

  /// Maps every vertex to its periodic representative: (i, j) -> (i mod m, j mod m).
  /// Throws std::logic_error on a Dirichlet mesh.
  std::vector<int> periodic_map() const;

  /// Same identification for edges: right-boundary edges map to the matching
  /// left edge, top edges to bottom edges, all others to themselves.
  std::vector<int> periodic_edge_map() const;

  /// Plain-text dump: "V T" header, one "x y" line per vertex, one "i j k"
  /// line per triangle.
  void write_text(std::ostream& os) const;

 private:
  int m_ = 0;
  BcMode mode_ = BcMode::Dirichlet;
  std::vector<Point> vertices_;
  std::vector<std::uint8_t> vertex_tags_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
};

}  // namespace sstokes
