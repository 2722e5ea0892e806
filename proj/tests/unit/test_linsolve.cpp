#include <numbers>
#include <thread>

#include "doctest.h"
#include "sstokes/errors.hpp"
#include "sstokes/linsolve.hpp"

using namespace sstokes;

namespace {

std::shared_ptr<const TriMesh> dirichlet_mesh(int m) {
  return std::make_shared<const TriMesh>(TriMesh::build_uniform(m, BcMode::Dirichlet));
}

Vector rhs_for(const FeSpace& vel) {
  const std::vector<Point> pts = quadrature_points(vel.mesh());
  std::vector<Vec2> f(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) f[i] = Vec2(std::sin(3.0 * pts[i].y()), pts[i].x() * pts[i].x());
  return vector_load(vel, f);
}

}  // namespace

TEST_CASE("SparseLu solves a small nonsymmetric system") {
  SparseMat a(3, 3);
  a.insert(0, 0) = 4.0;
  a.insert(0, 1) = 1.0;
  a.insert(1, 0) = 2.0;
  a.insert(1, 1) = 3.0;
  a.insert(2, 2) = -1.0;
  a.insert(1, 2) = 0.5;
  a.makeCompressed();
  const SparseLu lu(a);
  const Vector b = Vector::LinSpaced(3, 1.0, 3.0);
  CHECK((a * lu.solve(b) - b).norm() < 1e-14);
  CHECK(lu.rcond() > 0.0);
}

TEST_CASE("unstabilized P1/P1 Stokes is rejected as singular") {
  const auto mesh = dirichlet_mesh(4);
  const FeSpace vel(mesh, ElementKind::VectorP1, Constraint::DirichletZero);
  const FeSpace pres(mesh, ElementKind::ScalarP1, Constraint::ZeroMean);
  auto sys = std::make_shared<const BlockSystem>(BlockSystem::assemble(vel, pres, 0.1, 0.0));
  CHECK_THROWS_AS(SaddleSolver(sys, SaddleStrategy::Direct), SingularMatrix);
}

TEST_CASE("Direct and SchurCg agree") {
  const auto mesh = dirichlet_mesh(6);
  for (bool mixed : {true, false}) {
    CAPTURE(mixed);
    const FeSpace vel(mesh, mixed ? ElementKind::VectorP2 : ElementKind::VectorP1, Constraint::DirichletZero);
    const FeSpace pres(mesh, ElementKind::ScalarP1, Constraint::ZeroMean);
    const double eps = mixed ? 0.0 : mesh->h() * mesh->h();
    auto sys = std::make_shared<const BlockSystem>(BlockSystem::assemble(vel, pres, 0.05, eps));
    const Vector bu = rhs_for(vel);
    const Vector bp = Vector::Zero(pres.n_dofs());
    const auto [u1, r1] = SaddleSolver(sys, SaddleStrategy::Direct).solve(bu, bp);
    const auto [u2, r2] = SaddleSolver(sys, SaddleStrategy::SchurCg).solve(bu, bp);
    CHECK((u1 - u2).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((r1 - r2).cwiseAbs().maxCoeff() < 1e-8);
    const auto [ru, rp] = sys->residual(u1, r1, bu, bp);
    CHECK(ru.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(rp.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(sys->pressure_weights.dot(r1)) < 1e-13);
  }
}

TEST_CASE("MeanZeroSolver solves the periodic Poisson problem") {
  const auto mesh = std::make_shared<const TriMesh>(TriMesh::build_uniform(16, BcMode::Periodic));
  const FeSpace s(mesh, ElementKind::ScalarP1, Constraint::Periodic);
  const double pi = std::numbers::pi;
  const std::vector<Point> pts = quadrature_points(*mesh);
  std::vector<double> f(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) f[i] = 8.0 * pi * pi * std::cos(2 * pi * pts[i].x()) * std::cos(2 * pi * pts[i].y());
  const Vector w = basis_integrals(s);
  const MeanZeroSolver solver(assemble_stiffness(s), w);
  const Vector x = solver.solve(scalar_load(s, f));
  CHECK(std::abs(w.dot(x)) < 1e-13);
  const Vector exact = interpolate(s, [&](const Point& p) { return std::cos(2 * pi * p.x()) * std::cos(2 * pi * p.y()); });
  CHECK((x - exact).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("concurrent solves share one factorization") {
  const auto mesh = dirichlet_mesh(8);
  const FeSpace vel(mesh, ElementKind::VectorP2, Constraint::DirichletZero);
  const FeSpace pres(mesh, ElementKind::ScalarP1, Constraint::ZeroMean);
  auto sys = std::make_shared<const BlockSystem>(BlockSystem::assemble(vel, pres, 0.1, 0.0));
  const SaddleSolver solver(sys);
  const Vector bu = rhs_for(vel);
  const Vector bp = Vector::Zero(pres.n_dofs());
  const auto [u0, r0] = solver.solve(bu, bp);
  std::vector<Vector> out(4);
  std::vector<std::thread> pool;
  for (int i = 0; i < 4; ++i) {
    pool.emplace_back([&, i] { out[i] = solver.solve((i + 1) * bu, bp).first; });
  }
  for (auto& t : pool) t.join();
  for (int i = 0; i < 4; ++i) CHECK((out[i] - (i + 1) * u0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("solve_spd rejects an indefinite matrix") {
  SparseMat a(2, 2);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = -1.0;
  CHECK_THROWS_AS(solve_spd(a, Vector::Ones(2)), NumericalError);
}
