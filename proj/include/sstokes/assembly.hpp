#pragma once

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "sstokes/fem.hpp"

namespace sstokes {

/// Compressed sparse row storage; assembled matrices carry no explicit zeros.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseMat assemble_mass(const FeSpace& space);
SparseMat assemble_stiffness(const FeSpace& space);

/// Rows are pressure DOFs, columns velocity DOFs: entry (i, j) = (div v_j, q_i).
SparseMat assemble_divergence(const FeSpace& vel, const FeSpace& pres);

// Loads from data sampled at the quadrature points of every triangle
// (triangle-major, Quadrature::degree4().size() values per triangle).

/// b_i = (f, phi_i)
Vector scalar_load(const FeSpace& space, std::span<const double> f);
/// b_i = (f, v_i) for a vector space
Vector vector_load(const FeSpace& space, std::span<const Vec2> f);
/// b_i = (f, grad phi_i) for a scalar space
Vector gradient_load(const FeSpace& space, std::span<const Vec2> f);
/// b_i = dW * (field, v_i)
Vector noise_load(const FeSpace& vel, std::span<const Vec2> field, double dW);

void eval_at_quadrature(const FeSpace& scalar, const Vector& coeffs, std::span<double> out);
void eval_vector_at_quadrature(const FeSpace& vel, const Vector& coeffs, std::span<Vec2> out);
void eval_gradient_at_quadrature(const FeSpace& scalar, const Vector& coeffs, std::span<Vec2> out);

/// The time-independent blocks of one implicit Euler step:
///
///   [ mass_scale*M + k*A   -k*Bdiv^T ] [u]   [rhs_u]
///   [ Bdiv                  eps*L    ] [r] = [rhs_p]
///
/// with r constrained to zero mean through pressure_weights (the integrals of
/// the pressure basis functions).
struct BlockSystem {
  SparseMat M;
  SparseMat A;
  SparseMat Bdiv;
  SparseMat L;
  Vector pressure_weights;
  double k = 1.0;
  double eps = 0.0;
  double mass_scale = 1.0;

  static BlockSystem assemble(const FeSpace& vel, const FeSpace& pres, double k, double eps);
  /// Steady Stokes operator: mass_scale = 0, k = 1.
  static BlockSystem assemble_steady(const FeSpace& vel, const FeSpace& pres, double eps);

  int n_velocity() const { return static_cast<int>(M.rows()); }
  int n_pressure() const { return static_cast<int>(L.rows()); }

  /// Block residual [rhs_u; rhs_p] - K [u; r].
  std::pair<Vector, Vector> residual(const Vector& u, const Vector& r, const Vector& rhs_u,
                                     const Vector& rhs_p) const;
};

}  // namespace sstokes
