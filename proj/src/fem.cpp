#include "sstokes/fem.hpp"

#include <stdexcept>

#include "sstokes/assembly.hpp"
#include "sstokes/linsolve.hpp"

namespace sstokes {

const Quadrature& Quadrature::degree4() {
  static const Quadrature rule = [] {
    Quadrature q;
    constexpr double a1 = 0.445948490915964886;
    constexpr double w1 = 0.223381589678011466;
    constexpr double a2 = 0.091576213509770743;
    constexpr double w2 = 0.109951743655321868;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const double b = 1.0 - 2.0 * a;
      q.points.push_back({a, a, b});
      q.points.push_back({a, b, a});
      q.points.push_back({b, a, a});
      for (int i = 0; i < 3; ++i) q.weights.push_back(0.5 * w);
    }
    return q;
  }();
  return rule;
}

TriangleGeometry TriangleGeometry::of(const TriMesh& mesh, int t) {
  TriangleGeometry g;
  const auto& tri = mesh.triangles()[t];
  for (int i = 0; i < 3; ++i) g.vertex[i] = mesh.vertices()[tri[i]];
  const double det = (g.vertex[1].x() - g.vertex[0].x()) * (g.vertex[2].y() - g.vertex[0].y()) -
                     (g.vertex[2].x() - g.vertex[0].x()) * (g.vertex[1].y() - g.vertex[0].y());
  g.area = 0.5 * det;
  for (int i = 0; i < 3; ++i) {
    const Point& p = g.vertex[(i + 1) % 3];
    const Point& q = g.vertex[(i + 2) % 3];
    // gradient of the barycentric coordinate vanishing on edge pq
    g.grad_lambda[i] = Vec2(p.y() - q.y(), q.x() - p.x()) / det;
  }
  return g;
}

ReferenceBasis ReferenceBasis::at(int degree, const Barycentric& b) {
  ReferenceBasis r;
  if (degree == 1) {
    r.count = 3;
    for (int a = 0; a < 3; ++a) {
      r.value[a] = b[a];
      r.dlambda[a] = {0.0, 0.0, 0.0};
      r.dlambda[a][a] = 1.0;
    }
    return r;
  }
  r.count = 6;
  for (int a = 0; a < 3; ++a) {
    r.value[a] = b[a] * (2.0 * b[a] - 1.0);
    r.dlambda[a] = {0.0, 0.0, 0.0};
    r.dlambda[a][a] = 4.0 * b[a] - 1.0;
  }
  for (int e = 0; e < 3; ++e) {
    const int i = e;
    const int j = (e + 1) % 3;
    r.value[3 + e] = 4.0 * b[i] * b[j];
    r.dlambda[3 + e] = {0.0, 0.0, 0.0};
    r.dlambda[3 + e][i] = 4.0 * b[j];
    r.dlambda[3 + e][j] = 4.0 * b[i];
  }
  return r;
}

FeSpace::FeSpace(std::shared_ptr<const TriMesh> mesh, ElementKind kind, Constraint constraint)
    : mesh_(std::move(mesh)), kind_(kind), constraint_(constraint) {
  if (!mesh_) throw std::invalid_argument("FeSpace: null mesh");
  degree_ = (kind_ == ElementKind::ScalarP1 || kind_ == ElementKind::VectorP1) ? 1 : 2;
  components_ = (kind_ == ElementKind::VectorP1 || kind_ == ElementKind::VectorP2) ? 2 : 1;

  const TriMesh& m = *mesh_;
  const int nv = m.n_vertices();
  n_nodes_ = degree_ == 1 ? nv : nv + m.n_edges();

  std::vector<int> rep(n_nodes_);
  for (int n = 0; n < n_nodes_; ++n) rep[n] = n;
  std::vector<char> eliminated(n_nodes_, 0);

  if (constraint_ == Constraint::Periodic) {
    const std::vector<int> vrep = m.periodic_map();
    for (int v = 0; v < nv; ++v) rep[v] = vrep[v];
    if (degree_ == 2) {
      const std::vector<int> erep = m.periodic_edge_map();
      for (int e = 0; e < m.n_edges(); ++e) rep[nv + e] = nv + erep[e];
    }
  } else if (constraint_ == Constraint::DirichletZero) {
    for (int v = 0; v < nv; ++v) eliminated[v] = m.vertex_tags(v) != boundary::kInterior;
    if (degree_ == 2) {
      for (int e = 0; e < m.n_edges(); ++e) eliminated[nv + e] = m.edges()[e].tags != boundary::kInterior;
    }
  }

  node_dof_.assign(n_nodes_, -1);
  int next = 0;
  for (int n = 0; n < n_nodes_; ++n) {
    if (eliminated[n] || rep[n] != n) continue;
    node_dof_[n] = next++;
  }
  for (int n = 0; n < n_nodes_; ++n) {
    if (!eliminated[n] && rep[n] != n) node_dof_[n] = node_dof_[rep[n]];
  }
  n_scalar_dofs_ = next;

  const int nloc = local_nodes();
  element_nodes_.resize(static_cast<std::size_t>(m.n_triangles()) * nloc);
  element_dofs_.resize(element_nodes_.size());
  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& tri = m.triangles()[t];
    const auto& ted = m.triangle_edges()[t];
    for (int a = 0; a < nloc; ++a) {
      const int node = a < 3 ? tri[a] : nv + ted[a - 3];
      element_nodes_[static_cast<std::size_t>(t) * nloc + a] = node;
      element_dofs_[static_cast<std::size_t>(t) * nloc + a] = node_dof_[node];
    }
  }
}

Point FeSpace::node_coord(int node) const {
  const int nv = mesh_->n_vertices();
  return node < nv ? mesh_->vertices()[node] : mesh_->edges()[node - nv].mid;
}

std::vector<Point> FeSpace::dof_coords() const {
  std::vector<Point> coords(n_dofs(), Point::Zero());
  std::vector<char> seen(n_scalar_dofs_, 0);
  for (int n = 0; n < n_nodes_; ++n) {
    const int s = node_dof_[n];
    if (s < 0 || seen[s]) continue;
    seen[s] = 1;
    for (int c = 0; c < components_; ++c) coords[c * n_scalar_dofs_ + s] = node_coord(n);
  }
  return coords;
}

FeSpace FeSpace::scalar_space() const {
  const ElementKind k = degree_ == 1 ? ElementKind::ScalarP1 : ElementKind::ScalarP2;
  return FeSpace(mesh_, k, constraint_);
}

BasisEval FeSpace::eval_basis(int t, const Barycentric& b) const {
  const TriangleGeometry g = TriangleGeometry::of(*mesh_, t);
  const ReferenceBasis ref = ReferenceBasis::at(degree_, b);
  BasisEval out;
  out.count = ref.count;
  for (int a = 0; a < ref.count; ++a) {
    out.value[a] = ref.value[a];
    out.grad[a] = ref.dlambda[a][0] * g.grad_lambda[0] + ref.dlambda[a][1] * g.grad_lambda[1] +
                  ref.dlambda[a][2] * g.grad_lambda[2];
  }
  return out;
}

ScalarSample evaluate_scalar(const FeSpace& space, const Vector& coeffs, int t, const Barycentric& b) {
  const BasisEval basis = space.eval_basis(t, b);
  const auto dofs = space.element_dofs(t);
  ScalarSample s;
  for (int a = 0; a < basis.count; ++a) {
    if (dofs[a] < 0) continue;
    s.value += coeffs[dofs[a]] * basis.value[a];
    s.grad += coeffs[dofs[a]] * basis.grad[a];
  }
  return s;
}

VectorSample evaluate_vector(const FeSpace& space, const Vector& coeffs, int t, const Barycentric& b) {
  const BasisEval basis = space.eval_basis(t, b);
  const auto dofs = space.element_dofs(t);
  const int ns = space.n_scalar_dofs();
  VectorSample s;
  for (int a = 0; a < basis.count; ++a) {
    if (dofs[a] < 0) continue;
    for (int c = 0; c < 2; ++c) {
      const double coef = coeffs[c * ns + dofs[a]];
      s.value[c] += coef * basis.value[a];
      s.grad.row(c) += coef * basis.grad[a].transpose();
    }
  }
  return s;
}

Vector interpolate(const FeSpace& space, const ScalarFunction& f) {
  if (space.components() != 1) throw std::invalid_argument("interpolate: scalar space expected");
  Vector c = Vector::Zero(space.n_dofs());
  // periodic images share a DOF; the representative (visited first) defines it
  std::vector<char> done(space.n_scalar_dofs(), 0);
  for (int n = 0; n < space.n_nodes(); ++n) {
    const int d = space.node_dof(n);
    if (d < 0 || done[d]) continue;
    done[d] = 1;
    c[d] = f(space.node_coord(n));
  }
  return c;
}

Vector interpolate_vector(const FeSpace& space, const VectorFunction& f) {
  if (space.components() != 2) throw std::invalid_argument("interpolate_vector: vector space expected");
  Vector c = Vector::Zero(space.n_dofs());
  std::vector<char> done(space.n_scalar_dofs(), 0);
  const int ns = space.n_scalar_dofs();
  for (int n = 0; n < space.n_nodes(); ++n) {
    const int d = space.node_dof(n);
    if (d < 0 || done[d]) continue;
    done[d] = 1;
    const Vec2 v = f(space.node_coord(n));
    c[d] = v.x();
    c[ns + d] = v.y();
  }
  return c;
}

Vector expand(const FeSpace& space, const Vector& coeffs) {
  const int nn = space.n_nodes();
  Vector full = Vector::Zero(static_cast<Eigen::Index>(nn) * space.components());
  for (int c = 0; c < space.components(); ++c) {
    for (int n = 0; n < nn; ++n) {
      const int d = space.dof(n, c);
      if (d >= 0) full[c * nn + n] = coeffs[d];
    }
  }
  return full;
}

Vector basis_integrals(const FeSpace& space) {
  const Quadrature& q = Quadrature::degree4();
  const TriMesh& mesh = space.mesh();
  const int ns = space.n_scalar_dofs();
  Vector scalar = Vector::Zero(ns);
  std::vector<ReferenceBasis> ref;
  for (const auto& b : q.points) ref.push_back(ReferenceBasis::at(space.degree(), b));
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double jac = 2.0 * TriangleGeometry::of(mesh, t).area;
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < q.size(); ++k) {
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] >= 0) scalar[dofs[a]] += q.weights[k] * jac * ref[k].value[a];
      }
    }
  }
  Vector out(space.n_dofs());
  for (int c = 0; c < space.components(); ++c) out.segment(c * ns, ns) = scalar;
  return out;
}

double integral(const FeSpace& space, const Vector& coeffs) {
  return basis_integrals(space).dot(coeffs);
}

Vector zero_mean(const FeSpace& space, Vector coeffs) {
  if (space.components() != 1) throw std::invalid_argument("zero_mean: scalar space expected");
  if (space.constraint() == Constraint::DirichletZero) {
    throw std::invalid_argument("zero_mean: constants are not in a Dirichlet space");
  }
  // Lagrange bases reproduce constants with all-ones coefficients; |D| = 1.
  const double mean = integral(space, coeffs);
  coeffs.array() -= mean;
  return coeffs;
}

Vector l2_project(const FeSpace& space, const ScalarFunction& f) {
  const std::vector<Point> pts = quadrature_points(space.mesh());
  std::vector<double> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) values[i] = f(pts[i]);
  return solve_spd(assemble_mass(space), scalar_load(space, values));
}

Vector l2_project_vector(const FeSpace& space, const VectorFunction& f) {
  const std::vector<Point> pts = quadrature_points(space.mesh());
  std::vector<Vec2> values(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) values[i] = f(pts[i]);
  return solve_spd(assemble_mass(space), vector_load(space, values));
}

std::vector<Point> quadrature_points(const TriMesh& mesh) {
  const Quadrature& q = Quadrature::degree4();
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(mesh.n_triangles()) * q.size());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = TriangleGeometry::of(mesh, t);
    for (const auto& b : q.points) pts.push_back(g.map(b));
  }
  return pts;
}

}  // namespace sstokes
