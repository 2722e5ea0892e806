#include "sstokes/assembly.hpp"

#include <stdexcept>

namespace sstokes {

namespace {

const std::vector<ReferenceBasis>& reference_tables(int degree) {
  static const auto build = [](int deg) {
    std::vector<ReferenceBasis> tables;
    for (const auto& b : Quadrature::degree4().points) tables.push_back(ReferenceBasis::at(deg, b));
    return tables;
  };
  static const std::vector<ReferenceBasis> p1 = build(1);
  static const std::vector<ReferenceBasis> p2 = build(2);
  return degree == 1 ? p1 : p2;
}

Vec2 physical_gradient(const ReferenceBasis& ref, int a, const TriangleGeometry& g) {
  return ref.dlambda[a][0] * g.grad_lambda[0] + ref.dlambda[a][1] * g.grad_lambda[1] +
         ref.dlambda[a][2] * g.grad_lambda[2];
}

SparseMat from_triplets(int rows, int cols, const std::vector<Eigen::Triplet<double>>& trips) {
  SparseMat m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(0.0, 0.0);
  m.makeCompressed();
  return m;
}

// Local scalar matrices are accumulated per element and scattered to every
// component of a vector space (block diagonal).
template <typename LocalKernel>
SparseMat assemble_scalar_form(const FeSpace& space, LocalKernel kernel) {
  const Quadrature& q = Quadrature::degree4();
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nloc = space.local_nodes();
  const int ns = space.n_scalar_dofs();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nloc * nloc * space.components());

  Eigen::Matrix<double, 6, 6> local;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = TriangleGeometry::of(mesh, t);
    const double jac = 2.0 * g.area;
    local.setZero();
    for (int k = 0; k < q.size(); ++k) {
      kernel(ref[k], g, q.weights[k] * jac, nloc, local);
    }
    const auto dofs = space.element_dofs(t);
    for (int a = 0; a < nloc; ++a) {
      if (dofs[a] < 0) continue;
      for (int b = 0; b < nloc; ++b) {
        if (dofs[b] < 0) continue;
        for (int c = 0; c < space.components(); ++c) {
          trips.emplace_back(c * ns + dofs[a], c * ns + dofs[b], local(a, b));
        }
      }
    }
  }
  return from_triplets(space.n_dofs(), space.n_dofs(), trips);
}

}  // namespace

SparseMat assemble_mass(const FeSpace& space) {
  return assemble_scalar_form(space, [](const ReferenceBasis& ref, const TriangleGeometry&, double w, int n,
                                        Eigen::Matrix<double, 6, 6>& local) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) local(a, b) += w * ref.value[a] * ref.value[b];
  });
}

SparseMat assemble_stiffness(const FeSpace& space) {
  return assemble_scalar_form(space, [](const ReferenceBasis& ref, const TriangleGeometry& g, double w, int n,
                                        Eigen::Matrix<double, 6, 6>& local) {
    std::array<Vec2, 6> grad;
    for (int a = 0; a < n; ++a) grad[a] = physical_gradient(ref, a, g);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) local(a, b) += w * grad[a].dot(grad[b]);
  });
}

SparseMat assemble_divergence(const FeSpace& vel, const FeSpace& pres) {
  if (vel.components() != 2 || pres.components() != 1) {
    throw std::invalid_argument("assemble_divergence: need a vector velocity and scalar pressure space");
  }
  if (vel.mesh_ptr() != pres.mesh_ptr()) {
    throw std::invalid_argument("assemble_divergence: spaces live on different meshes");
  }
  const Quadrature& q = Quadrature::degree4();
  const auto& vref = reference_tables(vel.degree());
  const auto& pref = reference_tables(pres.degree());
  const TriMesh& mesh = vel.mesh();
  const int nv = vel.local_nodes();
  const int np = pres.local_nodes();
  const int ns = vel.n_scalar_dofs();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mesh.n_triangles()) * nv * np * 2);
  // local(c)(i, j) = (d phi_j / d x_c, psi_i)
  std::array<Eigen::Matrix<double, 6, 6>, 2> local;
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = TriangleGeometry::of(mesh, t);
    const double jac = 2.0 * g.area;
    local[0].setZero();
    local[1].setZero();
    for (int k = 0; k < q.size(); ++k) {
      const double w = q.weights[k] * jac;
      for (int j = 0; j < nv; ++j) {
        const Vec2 grad = physical_gradient(vref[k], j, g);
        for (int i = 0; i < np; ++i) {
          local[0](i, j) += w * grad.x() * pref[k].value[i];
          local[1](i, j) += w * grad.y() * pref[k].value[i];
        }
      }
    }
    const auto vdofs = vel.element_dofs(t);
    const auto pdofs = pres.element_dofs(t);
    for (int i = 0; i < np; ++i) {
      if (pdofs[i] < 0) continue;
      for (int j = 0; j < nv; ++j) {
        if (vdofs[j] < 0) continue;
        for (int c = 0; c < 2; ++c) trips.emplace_back(pdofs[i], c * ns + vdofs[j], local[c](i, j));
      }
    }
  }
  return from_triplets(pres.n_dofs(), vel.n_dofs(), trips);
}

Vector scalar_load(const FeSpace& space, std::span<const double> f) {
  const Quadrature& q = Quadrature::degree4();
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nq = q.size();
  if (f.size() != static_cast<std::size_t>(mesh.n_triangles()) * nq) {
    throw std::invalid_argument("scalar_load: wrong number of quadrature values");
  }
  Vector b = Vector::Zero(space.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double jac = 2.0 * TriangleGeometry::of(mesh, t).area;
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < nq; ++k) {
      const double wf = q.weights[k] * jac * f[static_cast<std::size_t>(t) * nq + k];
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] >= 0) b[dofs[a]] += wf * ref[k].value[a];
      }
    }
  }
  return b;
}

Vector vector_load(const FeSpace& space, std::span<const Vec2> f) {
  if (space.components() != 2) throw std::invalid_argument("vector_load: vector space expected");
  const Quadrature& q = Quadrature::degree4();
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nq = q.size();
  if (f.size() != static_cast<std::size_t>(mesh.n_triangles()) * nq) {
    throw std::invalid_argument("vector_load: wrong number of quadrature values");
  }
  const int ns = space.n_scalar_dofs();
  Vector b = Vector::Zero(space.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double jac = 2.0 * TriangleGeometry::of(mesh, t).area;
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < nq; ++k) {
      const Vec2 wf = q.weights[k] * jac * f[static_cast<std::size_t>(t) * nq + k];
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] < 0) continue;
        b[dofs[a]] += wf.x() * ref[k].value[a];
        b[ns + dofs[a]] += wf.y() * ref[k].value[a];
      }
    }
  }
  return b;
}

Vector gradient_load(const FeSpace& space, std::span<const Vec2> f) {
  if (space.components() != 1) throw std::invalid_argument("gradient_load: scalar space expected");
  const Quadrature& q = Quadrature::degree4();
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nq = q.size();
  if (f.size() != static_cast<std::size_t>(mesh.n_triangles()) * nq) {
    throw std::invalid_argument("gradient_load: wrong number of quadrature values");
  }
  Vector b = Vector::Zero(space.n_dofs());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = TriangleGeometry::of(mesh, t);
    const double jac = 2.0 * g.area;
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < nq; ++k) {
      const Vec2 wf = q.weights[k] * jac * f[static_cast<std::size_t>(t) * nq + k];
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] >= 0) b[dofs[a]] += wf.dot(physical_gradient(ref[k], a, g));
      }
    }
  }
  return b;
}

Vector noise_load(const FeSpace& vel, std::span<const Vec2> field, double dW) {
  if (dW == 0.0) return Vector::Zero(vel.n_dofs());
  return dW * vector_load(vel, field);
}

void eval_at_quadrature(const FeSpace& space, const Vector& coeffs, std::span<double> out) {
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nq = Quadrature::degree4().size();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < nq; ++k) {
      double v = 0.0;
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] >= 0) v += coeffs[dofs[a]] * ref[k].value[a];
      }
      out[static_cast<std::size_t>(t) * nq + k] = v;
    }
  }
}

void eval_vector_at_quadrature(const FeSpace& space, const Vector& coeffs, std::span<Vec2> out) {
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nq = Quadrature::degree4().size();
  const int ns = space.n_scalar_dofs();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < nq; ++k) {
      Vec2 v = Vec2::Zero();
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] < 0) continue;
        v.x() += coeffs[dofs[a]] * ref[k].value[a];
        v.y() += coeffs[ns + dofs[a]] * ref[k].value[a];
      }
      out[static_cast<std::size_t>(t) * nq + k] = v;
    }
  }
}

void eval_gradient_at_quadrature(const FeSpace& space, const Vector& coeffs, std::span<Vec2> out) {
  const auto& ref = reference_tables(space.degree());
  const TriMesh& mesh = space.mesh();
  const int nq = Quadrature::degree4().size();
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = TriangleGeometry::of(mesh, t);
    const auto dofs = space.element_dofs(t);
    for (int k = 0; k < nq; ++k) {
      Vec2 v = Vec2::Zero();
      for (int a = 0; a < ref[k].count; ++a) {
        if (dofs[a] >= 0) v += coeffs[dofs[a]] * physical_gradient(ref[k], a, g);
      }
      out[static_cast<std::size_t>(t) * nq + k] = v;
    }
  }
}

BlockSystem BlockSystem::assemble(const FeSpace& vel, const FeSpace& pres, double k, double eps) {
  BlockSystem sys;
  sys.M = assemble_mass(vel);
  sys.A = assemble_stiffness(vel);
  sys.Bdiv = assemble_divergence(vel, pres);
  sys.L = assemble_stiffness(pres);
  sys.pressure_weights = basis_integrals(pres);
  sys.k = k;
  sys.eps = eps;
  sys.mass_scale = 1.0;
  return sys;
}

BlockSystem BlockSystem::assemble_steady(const FeSpace& vel, const FeSpace& pres, double eps) {
  BlockSystem sys = assemble(vel, pres, 1.0, eps);
  sys.mass_scale = 0.0;
  return sys;
}

std::pair<Vector, Vector> BlockSystem::residual(const Vector& u, const Vector& r, const Vector& rhs_u,
                                                const Vector& rhs_p) const {
  Vector ru = rhs_u - (mass_scale * (M * u) + k * (A * u) - k * (Bdiv.transpose() * r));
  Vector rp = rhs_p - (Bdiv * u + eps * (L * r));
  return {std::move(ru), std::move(rp)};
}

}  // namespace sstokes
