#pragma once

// Brute-force reference implementations for the assembly and step tests.
// Basis functions, element geometry and quadrature are written out here from
// scratch; only the DOF numbering is taken from the space under test.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "sstokes/assembly.hpp"
#include "sstokes/fem.hpp"

namespace oracle {

using sstokes::FeSpace;
using sstokes::Point;
using sstokes::TriMesh;
using sstokes::Vec2;
using Dense = Eigen::MatrixXd;

struct Element {
  std::array<Point, 3> v;
  std::array<Vec2, 3> grad_lambda;
  double area = 0.0;
};

inline Element element(const TriMesh& mesh, int t) {
  Element e;
  const auto& tri = mesh.triangles()[t];
  for (int i = 0; i < 3; ++i) e.v[i] = mesh.vertices()[tri[i]];
  Eigen::Matrix2d jac;
  jac.col(0) = e.v[1] - e.v[0];
  jac.col(1) = e.v[2] - e.v[0];
  e.area = 0.5 * std::abs(jac.determinant());
  const Eigen::Matrix2d inv = jac.inverse();
  e.grad_lambda[1] = inv.row(0).transpose();
  e.grad_lambda[2] = inv.row(1).transpose();
  e.grad_lambda[0] = -e.grad_lambda[1] - e.grad_lambda[2];
  return e;
}

struct Shape {
  int n = 0;
  std::array<double, 6> value{};
  std::array<Vec2, 6> grad{};
};

inline Shape shape(int degree, const Element& e, const std::array<double, 3>& l) {
  Shape s;
  if (degree == 1) {
    s.n = 3;
    for (int i = 0; i < 3; ++i) {
      s.value[i] = l[i];
      s.grad[i] = e.grad_lambda[i];
    }
    return s;
  }
  s.n = 6;
  for (int i = 0; i < 3; ++i) {
    s.value[i] = l[i] * (2.0 * l[i] - 1.0);
    s.grad[i] = (4.0 * l[i] - 1.0) * e.grad_lambda[i];
  }
  for (int k = 0; k < 3; ++k) {
    const int i = k;
    const int j = (k + 1) % 3;
    s.value[3 + k] = 4.0 * l[i] * l[j];
    s.grad[3 + k] = 4.0 * (l[i] * e.grad_lambda[j] + l[j] * e.grad_lambda[i]);
  }
  return s;
}

struct Rule {
  std::vector<std::array<double, 3>> lambda;
  std::vector<double> weight;  // reference-area weights (sum 1/2)
};

/// Collapsed Gauss-Legendre rule on the reference triangle.
inline Rule collapsed_gauss(int n) {
  // Gauss-Legendre on [0, 1] via Newton iterations on P_n.
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
  Rule r;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double s = x[a];
      const double t = x[b] * (1.0 - s);
      r.lambda.push_back({1.0 - s - t, s, t});
      r.weight.push_back(w[a] * w[b] * (1.0 - s));
    }
  }
  return r;
}

/// The library's own 6-point rule, for loads whose data are only known to the
/// scheme at its quadrature points.
inline Rule library_rule() {
  const sstokes::Quadrature& q = sstokes::Quadrature::degree4();
  Rule r;
  for (int i = 0; i < q.size(); ++i) {
    r.lambda.push_back({q.points[i][0], q.points[i][1], q.points[i][2]});
    r.weight.push_back(q.weights[i]);
  }
  return r;
}

inline Dense mass(const FeSpace& space) {
  const Rule rule = collapsed_gauss(6);
  const TriMesh& mesh = space.mesh();
  const int ns = space.n_scalar_dofs();
  Dense out = Dense::Zero(space.n_dofs(), space.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Element e = element(mesh, t);
    const auto dofs = space.element_dofs(t);
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const Shape s = shape(space.degree(), e, rule.lambda[q]);
      const double w = 2.0 * e.area * rule.weight[q];
      for (int a = 0; a < s.n; ++a) {
        for (int b = 0; b < s.n; ++b) {
          if (dofs[a] < 0 || dofs[b] < 0) continue;
          for (int c = 0; c < space.components(); ++c) {
            out(c * ns + dofs[a], c * ns + dofs[b]) += w * s.value[a] * s.value[b];
          }
        }
      }
    }
  }
  return out;
}

inline Dense stiffness(const FeSpace& space) {
  const Rule rule = collapsed_gauss(6);
  const TriMesh& mesh = space.mesh();
  const int ns = space.n_scalar_dofs();
  Dense out = Dense::Zero(space.n_dofs(), space.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Element e = element(mesh, t);
    const auto dofs = space.element_dofs(t);
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const Shape s = shape(space.degree(), e, rule.lambda[q]);
      const double w = 2.0 * e.area * rule.weight[q];
      for (int a = 0; a < s.n; ++a) {
        for (int b = 0; b < s.n; ++b) {
          if (dofs[a] < 0 || dofs[b] < 0) continue;
          for (int c = 0; c < space.components(); ++c) {
            out(c * ns + dofs[a], c * ns + dofs[b]) += w * s.grad[a].dot(s.grad[b]);
          }
        }
      }
    }
  }
  return out;
}

/// Rows pressure DOFs, columns velocity DOFs: (div v_j, q_i).
inline Dense divergence(const FeSpace& vel, const FeSpace& pres) {
  const Rule rule = collapsed_gauss(6);
  const TriMesh& mesh = vel.mesh();
  const int ns = vel.n_scalar_dofs();
  Dense out = Dense::Zero(pres.n_dofs(), vel.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Element e = element(mesh, t);
    const auto vd = vel.element_dofs(t);
    const auto pd = pres.element_dofs(t);
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const Shape sv = shape(vel.degree(), e, rule.lambda[q]);
      const Shape sp = shape(pres.degree(), e, rule.lambda[q]);
      const double w = 2.0 * e.area * rule.weight[q];
      for (int i = 0; i < sp.n; ++i) {
        if (pd[i] < 0) continue;
        for (int b = 0; b < sv.n; ++b) {
          if (vd[b] < 0) continue;
          for (int c = 0; c < 2; ++c) out(pd[i], c * ns + vd[b]) += w * sp.value[i] * sv.grad[b][c];
        }
      }
    }
  }
  return out;
}

/// (f, v_i) for a vector space, f given pointwise.
template <class F>
Eigen::VectorXd vector_load(const FeSpace& space, F f, const Rule& rule = collapsed_gauss(6)) {
  const TriMesh& mesh = space.mesh();
  const int ns = space.n_scalar_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Element e = element(mesh, t);
    const auto dofs = space.element_dofs(t);
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const auto& l = rule.lambda[q];
      const Shape s = shape(space.degree(), e, l);
      const Point x = l[0] * e.v[0] + l[1] * e.v[1] + l[2] * e.v[2];
      const Vec2 fx = f(x);
      const double w = 2.0 * e.area * rule.weight[q];
      for (int a = 0; a < s.n; ++a) {
        if (dofs[a] < 0) continue;
        for (int c = 0; c < 2; ++c) out(c * ns + dofs[a]) += w * s.value[a] * fx[c];
      }
    }
  }
  return out;
}

/// Integrals of the scalar basis functions.
inline Eigen::VectorXd basis_integrals(const FeSpace& space) {
  const Rule rule = collapsed_gauss(6);
  const TriMesh& mesh = space.mesh();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.n_scalar_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const Element e = element(mesh, t);
    const auto dofs = space.element_dofs(t);
    for (std::size_t q = 0; q < rule.weight.size(); ++q) {
      const Shape s = shape(space.degree(), e, rule.lambda[q]);
      for (int a = 0; a < s.n; ++a) {
        if (dofs[a] >= 0) out(dofs[a]) += 2.0 * e.area * rule.weight[q] * s.value[a];
      }
    }
  }
  return out;
}

/// Dense solve of one implicit Euler Stokes step
///   (M + kA) u - k B^T r = rhs_u,  B u + eps L r = 0,  w^T r = 0
/// by a bordered system and full-pivoting LU.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> stokes_step(const FeSpace& vel, const FeSpace& pres, double k,
                                                                double eps, const Eigen::VectorXd& rhs_u) {
  const Dense M = mass(vel), A = stiffness(vel), B = divergence(vel, pres), L = stiffness(pres);
  const Eigen::VectorXd w = oracle::basis_integrals(pres);
  const int nu = static_cast<int>(M.rows()), np = static_cast<int>(L.rows());
  Dense K = Dense::Zero(nu + np + 1, nu + np + 1);
  K.topLeftCorner(nu, nu) = M + k * A;
  K.block(0, nu, nu, np) = -k * B.transpose();
  K.block(nu, 0, np, nu) = B;
  K.block(nu, nu, np, np) = eps * L;
  K.block(nu, nu + np, np, 1) = w;
  K.block(nu + np, nu, 1, np) = w.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + np + 1);
  rhs.head(nu) = rhs_u;
  const Eigen::VectorXd x = K.fullPivLu().solve(rhs);
  return {x.head(nu), x.segment(nu, np)};
}

inline double max_diff(const sstokes::SparseMat& a, const Dense& b) {
  return (Dense(a) - b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
