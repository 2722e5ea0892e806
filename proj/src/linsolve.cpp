#include "sstokes/linsolve.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <umfpack.h>

#include "sstokes/errors.hpp"

namespace sstokes {

namespace {

constexpr double kSpdResidual = 1e-10;
constexpr double kSaddleResidual = 1e-9;

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

}  // namespace

SparseLu::SparseLu(const SparseMat& a, double rcond_floor) : a_(a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SparseLu: matrix must be square");
  a_.makeCompressed();
  const int n = static_cast<int>(a_.rows());

  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_di_defaults(control);
  // Symmetric pattern (saddle blocks): AMD on A + A^T with diagonal preference
  // keeps the fill close to a Cholesky factor.
  control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;

  void* symbolic = nullptr;
  int status = umfpack_di_symbolic(n, n, a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), &symbolic,
                                   control, info);
  if (status != UMFPACK_OK) {
    throw SingularMatrix("SparseLu: symbolic analysis failed (UMFPACK status " + std::to_string(status) + ")");
  }
  status = umfpack_di_numeric(a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), symbolic, &numeric_,
                              control, info);
  umfpack_di_free_symbolic(&symbolic);
  rcond_ = info[UMFPACK_RCOND];
  if (status == UMFPACK_WARNING_singular_matrix) {
    umfpack_di_free_numeric(&numeric_);
    throw SingularMatrix("SparseLu: matrix is singular (zero pivot)");
  }
  if (status != UMFPACK_OK) {
    if (numeric_) umfpack_di_free_numeric(&numeric_);
    throw SingularMatrix("SparseLu: numeric factorization failed (UMFPACK status " + std::to_string(status) +
                         ")");
  }
  if (!(rcond_ >= rcond_floor)) {
    umfpack_di_free_numeric(&numeric_);
    std::ostringstream msg;
    msg << "SparseLu: matrix is numerically singular (pivot ratio " << rcond_ << ")";
    throw SingularMatrix(msg.str());
  }
}

SparseLu::~SparseLu() {
  if (numeric_) umfpack_di_free_numeric(&numeric_);
}

SparseLu::SparseLu(SparseLu&& other) noexcept
    : a_(std::move(other.a_)), numeric_(other.numeric_), rcond_(other.rcond_) {
  other.numeric_ = nullptr;
}

SparseLu& SparseLu::operator=(SparseLu&& other) noexcept {
  if (this != &other) {
    if (numeric_) umfpack_di_free_numeric(&numeric_);
    a_ = std::move(other.a_);
    numeric_ = other.numeric_;
    rcond_ = other.rcond_;
    other.numeric_ = nullptr;
  }
  return *this;
}

Vector SparseLu::solve(const Vector& b) const {
  const int n = size();
  if (b.size() != n) throw std::invalid_argument("SparseLu::solve: size mismatch");
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_di_defaults(control);
  control[UMFPACK_IRSTEP] = 0;
  std::vector<int> wi(n);
  std::vector<double> w(5 * static_cast<std::size_t>(n));
  Vector x(n);
  const int status = umfpack_di_wsolve(UMFPACK_A, a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), x.data(),
                                       b.data(), numeric_, control, info, wi.data(), w.data());
  if (status != UMFPACK_OK) {
    throw SingularMatrix("SparseLu::solve failed (UMFPACK status " + std::to_string(status) + ")");
  }
  return x;
}

SpdFactorization::SpdFactorization(const SparseMat& a) : n_(static_cast<int>(a.rows())) {
  const Eigen::SparseMatrix<double> col(a);
  llt_.compute(col);
  if (llt_.info() != Eigen::Success) {
    throw SingularMatrix("SpdFactorization: matrix is not positive definite");
  }
}

Vector SpdFactorization::solve(const Vector& b) const {
  Vector x = llt_.solve(b);
  if (llt_.info() != Eigen::Success) throw SingularMatrix("SpdFactorization: solve failed");
  return x;
}

Vector solve_spd(const SparseMat& a, const Vector& b) {
  if (b.squaredNorm() == 0.0) return Vector::Zero(a.rows());
  SpdFactorization f(a);
  Vector x = f.solve(b);
  const double res = relative((a * x - b).norm(), b.norm());
  if (!(res < kSpdResidual)) {
    throw SingularMatrix("solve_spd: relative residual " + std::to_string(res) + " above tolerance");
  }
  return x;
}

namespace {

SparseMat bordered(const SparseMat& l, const Vector& weights) {
  const int n = static_cast<int>(l.rows());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(l.nonZeros() + 2 * n);
  for (int i = 0; i < n; ++i) {
    for (SparseMat::InnerIterator it(l, i); it; ++it) trips.emplace_back(i, static_cast<int>(it.col()), it.value());
    if (weights[i] != 0.0) {
      trips.emplace_back(i, n, weights[i]);
      trips.emplace_back(n, i, weights[i]);
    }
  }
  SparseMat out(n + 1, n + 1);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

MeanZeroSolver::MeanZeroSolver(const SparseMat& l, const Vector& weights)
    : lu_(bordered(l, weights)), n_(static_cast<int>(l.rows())) {}

Vector MeanZeroSolver::solve(const Vector& b) const {
  Vector ext = Vector::Zero(n_ + 1);
  ext.head(n_) = b;
  return lu_.solve(ext).head(n_);
}

namespace {

SparseMat saddle_matrix(const BlockSystem& s) {
  const int nu = s.n_velocity();
  const int np = s.n_pressure();
  const SparseMat top_left = s.mass_scale * s.M + s.k * s.A;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(top_left.nonZeros() + 2 * s.Bdiv.nonZeros() + s.L.nonZeros() + 2 * np);
  for (int i = 0; i < nu; ++i) {
    for (SparseMat::InnerIterator it(top_left, i); it; ++it) trips.emplace_back(i, static_cast<int>(it.col()), it.value());
  }
  for (int i = 0; i < np; ++i) {
    for (SparseMat::InnerIterator it(s.Bdiv, i); it; ++it) {
      const double v = -s.k * it.value();
      trips.emplace_back(nu + i, static_cast<int>(it.col()), v);
      trips.emplace_back(static_cast<int>(it.col()), nu + i, v);
    }
    if (s.eps != 0.0) {
      for (SparseMat::InnerIterator it(s.L, i); it; ++it) {
        trips.emplace_back(nu + i, nu + static_cast<int>(it.col()), -s.k * s.eps * it.value());
      }
    }
    const double w = s.pressure_weights[i];
    trips.emplace_back(nu + i, nu + np, w);
    trips.emplace_back(nu + np, nu + i, w);
  }
  SparseMat out(nu + np + 1, nu + np + 1);
  out.setFromTriplets(trips.begin(), trips.end());
  out.prune(0.0, 0.0);
  return out;
}

}  // namespace

SaddleSolver::SaddleSolver(std::shared_ptr<const BlockSystem> sys, SaddleStrategy strategy)
    : sys_(std::move(sys)), strategy_(strategy) {
  if (!sys_) throw std::invalid_argument("SaddleSolver: null system");
  if (strategy_ == SaddleStrategy::Direct) {
    lu_ = std::make_unique<SparseLu>(saddle_matrix(*sys_), 1e-13);
  } else {
    velocity_ = std::make_unique<SpdFactorization>(SparseMat(sys_->mass_scale * sys_->M + sys_->k * sys_->A));
  }
}

std::pair<Vector, Vector> SaddleSolver::solve(const Vector& rhs_u, const Vector& rhs_p) const {
  const BlockSystem& s = *sys_;
  const int nu = s.n_velocity();
  const int np = s.n_pressure();
  if (rhs_u.size() != nu || rhs_p.size() != np) throw std::invalid_argument("SaddleSolver::solve: size mismatch");
  if (rhs_u.squaredNorm() == 0.0 && rhs_p.squaredNorm() == 0.0) {
    return {Vector::Zero(nu), Vector::Zero(np)};
  }

  Vector u, r;
  if (strategy_ == SaddleStrategy::Direct) {
    Vector rhs(nu + np + 1);
    rhs.head(nu) = rhs_u;
    rhs.segment(nu, np) = -s.k * rhs_p;
    rhs[nu + np] = 0.0;
    const Vector x = lu_->solve(rhs);
    u = x.head(nu);
    r = x.segment(nu, np);
  } else {
    std::tie(u, r) = solve_schur(rhs_u, rhs_p);
  }

  if (!u.allFinite() || !r.allFinite()) throw NumericalFailure("SaddleSolver: non-finite solution");
  const auto [ru, rp] = s.residual(u, r, rhs_u, rhs_p);
  const double scale = std::sqrt(rhs_u.squaredNorm() + (s.k * rhs_p).squaredNorm());
  const double res = relative(std::sqrt(ru.squaredNorm() + (s.k * rp).squaredNorm()), scale);
  if (!(res < kSaddleResidual)) {
    throw SingularMatrix("SaddleSolver: relative block residual " + std::to_string(res) + " above tolerance");
  }
  return {std::move(u), std::move(r)};
}

std::pair<Vector, Vector> SaddleSolver::solve_schur(const Vector& rhs_u, const Vector& rhs_p) const {
  const BlockSystem& s = *sys_;
  const Vector& w = s.pressure_weights;
  const int np = s.n_pressure();
  const auto project = [&](Vector v) {
    v.array() -= v.sum() / np;
    return v;
  };
  // S r = k B K^-1 B^T r + eps L r
  const auto apply = [&](const Vector& r) -> Vector {
    Vector out = s.k * (s.Bdiv * velocity_->solve(s.Bdiv.transpose() * r));
    if (s.eps != 0.0) out += s.eps * (s.L * r);
    return out;
  };

  const Vector ku = velocity_->solve(rhs_u);
  Vector g = project(rhs_p - s.Bdiv * ku);
  Vector r = Vector::Zero(np);
  Vector res = g;
  Vector z = project(res.cwiseQuotient(w));
  Vector d = z;
  double rz = res.dot(z);
  const double target = cg_tolerance * g.norm();
  int it = 0;
  for (; it < cg_max_iterations && res.norm() > target; ++it) {
    const Vector sd = project(apply(d));
    const double alpha = rz / d.dot(sd);
    r += alpha * d;
    res -= alpha * sd;
    z = project(res.cwiseQuotient(w));
    const double rz_new = res.dot(z);
    d = z + (rz_new / rz) * d;
    rz = rz_new;
  }
  if (res.norm() > target) {
    throw NotConverged("SaddleSolver: Schur-complement CG did not converge in " + std::to_string(it) +
                       " iterations");
  }
  r.array() -= w.dot(r) / w.sum();
  Vector u = velocity_->solve(rhs_u + s.k * (s.Bdiv.transpose() * r));
  return {std::move(u), std::move(r)};
}

std::pair<Vector, Vector> solve_saddle(const BlockSystem& sys, const Vector& rhs_u, const Vector& rhs_p) {
  SaddleSolver solver(std::make_shared<const BlockSystem>(sys));
  return solver.solve(rhs_u, rhs_p);
}

}  // namespace sstokes
