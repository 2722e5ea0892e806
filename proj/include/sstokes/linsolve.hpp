#pragma once

#include <memory>
#include <utility>

#include <Eigen/SparseCholesky>

#include "sstokes/assembly.hpp"

namespace sstokes {

/// Sparse LU factorization of a fixed square matrix (UMFPACK).
///
/// The numeric factor is immutable after construction; solve() uses private
/// workspace and may be called concurrently.
class SparseLu {
 public:
  /// Throws SingularMatrix when a pivot vanishes or the reciprocal pivot
  /// ratio falls below rcond_floor.
  explicit SparseLu(const SparseMat& a, double rcond_floor = 1e-14);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  Vector solve(const Vector& b) const;
  int size() const { return static_cast<int>(a_.rows()); }
  /// min |U_ii| / max |U_ii|
  double rcond() const { return rcond_; }

 private:
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> a_;
  void* numeric_ = nullptr;
  double rcond_ = 0.0;
};

/// Sparse Cholesky factorization of a symmetric positive definite matrix.
class SpdFactorization {
 public:
  explicit SpdFactorization(const SparseMat& a);
  Vector solve(const Vector& b) const;
  int size() const { return n_; }

 private:
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
  int n_ = 0;
};

/// One-shot SPD solve with a relative residual check of 1e-10.
Vector solve_spd(const SparseMat& a, const Vector& b);

/// Singular symmetric problem L x = b on the complement of constants, with
/// the constraint weights^T x = 0 enforced by a bordering row and column.
class MeanZeroSolver {
 public:
  MeanZeroSolver(const SparseMat& l, const Vector& weights);
  Vector solve(const Vector& b) const;

 private:
  SparseLu lu_;
  int n_ = 0;
};

enum class SaddleStrategy { Direct, SchurCg };

/// Solver for BlockSystem, factorized once and reused for every right-hand
/// side. Direct: LU of the symmetric bordered matrix
///
///   [ mass_scale*M + k*A   -k*Bdiv^T    0 ]
///   [ -k*Bdiv             -k*eps*L      w ]
///   [ 0                    w^T          0 ]
///
/// SchurCg: Cholesky of the velocity block and preconditioned CG on the
/// pressure Schur complement restricted to mean-zero vectors.
class SaddleSolver {
 public:
  explicit SaddleSolver(std::shared_ptr<const BlockSystem> sys,
                        SaddleStrategy strategy = SaddleStrategy::Direct);

  /// Returns (u, r) with r of zero mean. Throws NumericalError subclasses.
  std::pair<Vector, Vector> solve(const Vector& rhs_u, const Vector& rhs_p) const;

  const BlockSystem& system() const { return *sys_; }
  SaddleStrategy strategy() const { return strategy_; }

  double cg_tolerance = 1e-12;
  int cg_max_iterations = 10000;

 private:
  std::pair<Vector, Vector> solve_schur(const Vector& rhs_u, const Vector& rhs_p) const;

  std::shared_ptr<const BlockSystem> sys_;
  SaddleStrategy strategy_;
  std::unique_ptr<SparseLu> lu_;
  std::unique_ptr<SpdFactorization> velocity_;
};

/// Convenience wrapper: factorize and solve once.
std::pair<Vector, Vector> solve_saddle(const BlockSystem& sys, const Vector& rhs_u, const Vector& rhs_p);

}  // namespace sstokes
