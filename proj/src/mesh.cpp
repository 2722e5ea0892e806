#include "sstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace sstokes {

namespace {

std::uint8_t tags_for(int i, int j, int m) {
  std::uint8_t t = boundary::kInterior;
  if (i == 0) t |= boundary::kLeft;
  if (i == m) t |= boundary::kRight;
  if (j == 0) t |= boundary::kBottom;
  if (j == m) t |= boundary::kTop;
  return t;
}

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

TriMesh TriMesh::build_uniform(int m, BcMode mode) {
  if (m < 2) {
    throw std::invalid_argument("build_uniform: need m >= 2, got " + std::to_string(m));
  }
  TriMesh mesh;
  mesh.m_ = m;
  mesh.mode_ = mode;

  const int nv = (m + 1) * (m + 1);
  mesh.vertices_.reserve(nv);
  mesh.vertex_tags_.reserve(nv);
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      mesh.vertices_.emplace_back(static_cast<double>(i) / m, static_cast<double>(j) / m);
      mesh.vertex_tags_.push_back(tags_for(i, j, m));
    }
  }

  mesh.triangles_.reserve(2 * m * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int v00 = mesh.vertex_index(i, j);
      const int v10 = mesh.vertex_index(i + 1, j);
      const int v11 = mesh.vertex_index(i + 1, j + 1);
      const int v01 = mesh.vertex_index(i, j + 1);
      mesh.triangles_.push_back({v00, v10, v11});
      mesh.triangles_.push_back({v00, v11, v01});
    }
  }

  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * m * m + 2 * m);
  mesh.triangle_edges_.resize(mesh.triangles_.size());
  for (std::size_t t = 0; t < mesh.triangles_.size(); ++t) {
    const auto& tri = mesh.triangles_[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), mesh.n_edges());
      if (inserted) {
        Edge edge;
        edge.v = {std::min(a, b), std::max(a, b)};
        edge.mid = 0.5 * (mesh.vertices_[a] + mesh.vertices_[b]);
        edge.tags = mesh.vertex_tags_[a] & mesh.vertex_tags_[b];
        mesh.edges_.push_back(edge);
      }
      mesh.triangle_edges_[t][e] = it->second;
    }
  }
  return mesh;
}

double TriMesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point d1 = vertices_[tri[1]] - vertices_[tri[0]];
  const Point d2 = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

int TriMesh::locate(const Point& p) const {
  const double sx = p.x() * m_;
  const double sy = p.y() * m_;
  const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, m_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, m_ - 1);
  const bool upper = (sy - j) > (sx - i);
  return 2 * (j * m_ + i) + (upper ? 1 : 0);
}

std::array<double, 3> TriMesh::barycentric(int t, const Point& p) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
  const double l1 = ((p.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (p.y() - a.y())) / det;
  const double l2 = ((b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

std::vector<int> TriMesh::periodic_map() const {
  if (mode_ != BcMode::Periodic) {
    throw std::logic_error("periodic_map: mesh was built with Dirichlet boundary mode");
  }
  std::vector<int> rep(vertices_.size());
  for (int j = 0; j <= m_; ++j) {
    for (int i = 0; i <= m_; ++i) {
      rep[vertex_index(i, j)] = vertex_index(i % m_, j % m_);
    }
  }
  return rep;
}

std::vector<int> TriMesh::periodic_edge_map() const {
  if (mode_ != BcMode::Periodic) throw std::logic_error("periodic_edge_map: mesh is not periodic");
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(edges_.size());
  for (int e = 0; e < n_edges(); ++e) lookup.emplace(edge_key(edges_[e].v[0], edges_[e].v[1]), e);

  std::vector<int> rep(edges_.size());
  for (int e = 0; e < n_edges(); ++e) {
    const Edge& edge = edges_[e];
    rep[e] = e;
    const bool on_right = (edge.tags & boundary::kRight) != 0;
    const bool on_top = (edge.tags & boundary::kTop) != 0;
    if (on_right || on_top) {
      // Translate the whole edge by one period, so corner edges map correctly.
      std::array<int, 2> partner{};
      for (int a = 0; a < 2; ++a) {
        const int v = edge.v[a];
        int i = v % (m_ + 1), j = v / (m_ + 1);
        if (on_right) i -= m_;
        if (on_top) j -= m_;
        partner[a] = vertex_index(i, j);
      }
      rep[e] = lookup.at(edge_key(partner[0], partner[1]));
    }
  }
  return rep;
}

void TriMesh::write_text(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << n_vertices() << ' ' << n_triangles() << '\n';
  for (const Point& v : vertices_) os << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : triangles_) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os.precision(old_precision);
}

}  // namespace sstokes
