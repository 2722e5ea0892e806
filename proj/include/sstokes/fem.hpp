#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "sstokes/mesh.hpp"

namespace sstokes {

using Vector = Eigen::VectorXd;
using Barycentric = std::array<double, 3>;
using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Vec2(const Point&)>;

enum class ElementKind { ScalarP1, ScalarP2, VectorP1, VectorP2 };
enum class Constraint { None, ZeroMean, DirichletZero, Periodic };

/// Symmetric 6-point rule on the reference triangle, exact for degree 4.
/// Weights sum to the reference area 1/2.
struct Quadrature {
  std::vector<Barycentric> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  static const Quadrature& degree4();
};

/// Affine geometry of one triangle.
struct TriangleGeometry {
  std::array<Point, 3> vertex;
  std::array<Vec2, 3> grad_lambda;
  double area = 0.0;

  static TriangleGeometry of(const TriMesh& mesh, int t);
  Point map(const Barycentric& b) const {
    return b[0] * vertex[0] + b[1] * vertex[1] + b[2] * vertex[2];
  }
};

/// Scalar local shape functions of degree 1 (3 functions) or 2 (6 functions:
/// vertices first, then the midpoints of local edges 01, 12, 20).
struct ReferenceBasis {
  int count = 0;
  std::array<double, 6> value{};
  // d(value)/d(lambda_i); physical gradient is sum_i dlambda[a][i] * grad(lambda_i).
  std::array<std::array<double, 3>, 6> dlambda{};

  static ReferenceBasis at(int degree, const Barycentric& b);
};

struct BasisEval {
  int count = 0;
  std::array<double, 6> value{};
  std::array<Vec2, 6> grad{};
};

/// Lagrange finite element space on a TriMesh.
///
/// Scalar nodes are the mesh vertices (degree 1) or vertices followed by edge
/// midpoints (degree 2). Vector spaces number DOFs component-major:
/// dof(node, c) = c * n_scalar_dofs() + node_dof(node). Dirichlet nodes are
/// eliminated (node_dof == -1); periodic nodes share their representative's DOF.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const TriMesh> mesh, ElementKind kind, Constraint constraint);

  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  ElementKind kind() const { return kind_; }
  Constraint constraint() const { return constraint_; }

  int degree() const { return degree_; }
  int components() const { return components_; }
  int local_nodes() const { return degree_ == 1 ? 3 : 6; }
  int n_nodes() const { return n_nodes_; }
  int n_scalar_dofs() const { return n_scalar_dofs_; }
  int n_dofs() const { return components_ * n_scalar_dofs_; }

  int node_dof(int node) const { return node_dof_[node]; }
  int dof(int node, int comp) const {
    const int s = node_dof_[node];
    return s < 0 ? -1 : comp * n_scalar_dofs_ + s;
  }
  Point node_coord(int node) const;
  std::vector<Point> dof_coords() const;

  /// Global node ids of triangle t's local nodes.
  std::span<const int> element_nodes(int t) const {
    return {element_nodes_.data() + static_cast<std::size_t>(t) * local_nodes(),
            static_cast<std::size_t>(local_nodes())};
  }
  /// Scalar DOF ids (or -1) of triangle t's local nodes.
  std::span<const int> element_dofs(int t) const {
    return {element_dofs_.data() + static_cast<std::size_t>(t) * local_nodes(),
            static_cast<std::size_t>(local_nodes())};
  }

  BasisEval eval_basis(int t, const Barycentric& b) const;

  FeSpace with_constraint(Constraint c) const { return FeSpace(mesh_, kind_, c); }
  FeSpace scalar_space() const;

  bool same_layout(const FeSpace& other) const {
    return mesh_ == other.mesh_ && kind_ == other.kind_ && constraint_ == other.constraint_;
  }

 private:
  std::shared_ptr<const TriMesh> mesh_;
  ElementKind kind_;
  Constraint constraint_;
  int degree_ = 1;
  int components_ = 1;
  int n_nodes_ = 0;
  int n_scalar_dofs_ = 0;
  std::vector<int> node_dof_;
  std::vector<int> element_nodes_;
  std::vector<int> element_dofs_;
};

struct ScalarSample {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
};

struct VectorSample {
  Vec2 value = Vec2::Zero();
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();  // grad(c, d) = d u_c / d x_d
};

ScalarSample evaluate_scalar(const FeSpace& space, const Vector& coeffs, int t, const Barycentric& b);
VectorSample evaluate_vector(const FeSpace& space, const Vector& coeffs, int t, const Barycentric& b);

/// Nodal interpolation; eliminated Dirichlet DOFs are simply absent.
Vector interpolate(const FeSpace& space, const ScalarFunction& f);
Vector interpolate_vector(const FeSpace& space, const VectorFunction& f);

/// Coefficients on every node (component-major, n_nodes per component);
/// eliminated nodes read 0.
Vector expand(const FeSpace& space, const Vector& coeffs);

/// Integral of each basis function over D.
Vector basis_integrals(const FeSpace& space);

/// Integral over D of the represented scalar function.
double integral(const FeSpace& space, const Vector& coeffs);

/// Shifts a scalar function by a constant so its integral over D vanishes.
Vector zero_mean(const FeSpace& space, Vector coeffs);

/// L2 projection of f (evaluated at quadrature points) onto the space.
Vector l2_project(const FeSpace& space, const ScalarFunction& f);
Vector l2_project_vector(const FeSpace& space, const VectorFunction& f);

/// Quadrature points of every triangle, triangle-major.
std::vector<Point> quadrature_points(const TriMesh& mesh);

}  // namespace sstokes
