#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "sstokes/errors.hpp"
#include "sstokes/schemes.hpp"

using namespace sstokes;

namespace {

bool bitwise_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

SchemeConfig test1_config(SchemeKind kind, int m, double k) {
  SchemeConfig c;
  c.scheme = kind;
  c.m = m;
  c.k = k;
  c.T = 1.0;
  c.B = test1_noise_coefficient;
  c.f = [](double, const Point&) { return Vec2(1.0, 1.0); };
  c.noise = NoiseKind::TruncatedQW;
  c.J = 4;
  c.potential_bc = PotentialBc::Periodic;
  return c;
}

// Quadratic in x, so every load it produces is integrated exactly.
Vec2 smooth_forcing(double t, const Point& x) { return Vec2(x.x() * x.x() + t * x.y(), x.x() * x.y() - 0.5); }

NoiseIncrement scalar_increment(double dw) {
  NoiseIncrement inc;
  inc.scalar = dw;
  return inc;
}

}  // namespace

TEST_CASE("zero data is a fixed point") {
  for (SchemeKind kind : {SchemeKind::MixedHelmholtz, SchemeKind::StabilizedStandard}) {
    SchemeConfig c;
    c.scheme = kind;
    c.m = 6;
    c.k = 0.25;
    auto disc = std::make_shared<const Discretization>(c);
    const WienerPath path = WienerPath::sample(NoiseKind::ScalarBM, 1, 0.25, 1.0, 4);
    const Trajectory tr = run_realization(disc, path);
    CHECK(tr.final.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.final.r.cwiseAbs().maxCoeff() == 0.0);
    CHECK(tr.p_sum.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("repeated runs are bitwise identical") {
  auto disc = std::make_shared<const Discretization>(test1_config(SchemeKind::MixedHelmholtz, 6, 0.125));
  const WienerPath path = WienerPath::sample(NoiseKind::TruncatedQW, 4, 1.0 / 64, 1.0, 11);
  const Trajectory a = run_realization(disc, path);
  const Trajectory b = run_realization(disc, path);
  CHECK(bitwise_equal(a.final.u, b.final.u));
  CHECK(bitwise_equal(a.r_sum, b.r_sum));
  CHECK(bitwise_equal(a.p_sum, b.p_sum));
}

TEST_CASE("Helmholtz and standard schemes coincide when B = 0") {
  for (bool mixed : {true, false}) {
    CAPTURE(mixed);
    SchemeConfig c;
    c.m = 5;
    c.k = 0.1;
    c.f = smooth_forcing;
    c.scheme = mixed ? SchemeKind::MixedHelmholtz : SchemeKind::StabilizedHelmholtz;
    auto h = std::make_shared<const Discretization>(c);
    c.scheme = mixed ? SchemeKind::MixedStandard : SchemeKind::StabilizedStandard;
    auto s = std::make_shared<const Discretization>(c);
    const WienerPath path = WienerPath::sample(NoiseKind::ScalarBM, 1, 0.05, 1.0, 2);
    const Trajectory a = run_realization(h, path);
    const Trajectory b = run_realization(s, path);
    CHECK(bitwise_equal(a.final.u, b.final.u));
    CHECK(bitwise_equal(a.final.p, b.final.p));
    CHECK(bitwise_equal(a.p_sum, b.p_sum));
  }
}

TEST_CASE("Helmholtz split examples") {
  SUBCASE("constant field on a periodic potential space") {
    SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 8, 0.1);
    c.B = [](const Vec2&) { return Vec2(1.0, 1.0); };
    const Scheme scheme(std::make_shared<const Discretization>(c));
    const HelmholtzSplit split = scheme.helmholtz_step(Vector::Zero(scheme.discretization().velocity().n_dofs()));
    CHECK(split.xi.cwiseAbs().maxCoeff() < 1e-14);
    for (const Vec2& e : split.eta) CHECK((e - Vec2(1.0, 1.0)).norm() < 1e-14);
  }
  SUBCASE("Test-1 coefficient at u = 0 matches the constant field") {
    const Scheme scheme(std::make_shared<const Discretization>(test1_config(SchemeKind::MixedHelmholtz, 8, 0.1)));
    const HelmholtzSplit split = scheme.helmholtz_step(Vector::Zero(scheme.discretization().velocity().n_dofs()));
    CHECK(split.xi.cwiseAbs().maxCoeff() < 1e-14);
    for (const Vec2& b : split.B) CHECK((b - Vec2(1.0, 1.0)).norm() == 0.0);
  }
  SUBCASE("gradient fields project to zero load") {
    const double pi = std::numbers::pi;
    SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 16, 0.1);
    c.bc_mode = BcMode::Periodic;
    c.B = [](const Vec2& u) { return u; };
    const Scheme scheme(std::make_shared<const Discretization>(c));
    const Discretization& d = scheme.discretization();
    const FeSpace chi_space(d.velocity().mesh_ptr(), ElementKind::ScalarP1, Constraint::Periodic);
    const Vector chi = interpolate(chi_space, [&](const Point& x) { return std::sin(2 * pi * x.x()); });
    // u = grad(chi_h), which is piecewise constant; represent it in P2 by L2 projection.
    std::vector<Vec2> g(d.quad_points().size());
    eval_gradient_at_quadrature(chi_space, chi, g);
    const Vector u = solve_spd(assemble_mass(d.velocity()), vector_load(d.velocity(), g));
    const HelmholtzSplit split = scheme.helmholtz_step(u);
    CHECK(gradient_load(d.potential(), split.eta).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("invariants hold on every step") {
  for (SchemeKind kind : {SchemeKind::MixedHelmholtz, SchemeKind::MixedStandard, SchemeKind::StabilizedHelmholtz,
                          SchemeKind::StabilizedStandard}) {
    for (PotentialBc pb : {PotentialBc::Periodic, PotentialBc::Natural}) {
      CAPTURE(static_cast<int>(kind));
      CAPTURE(static_cast<int>(pb));
      SchemeConfig c = test1_config(kind, 8, 1.0 / 16);
      c.potential_bc = pb;
      auto disc = std::make_shared<const Discretization>(c);
      const WienerPath path = WienerPath::sample(NoiseKind::TruncatedQW, 4, 1.0 / 64, 1.0, 9);
      const Trajectory tr = run_realization(disc, path, RunOptions{true, {}});
      REQUIRE(tr.diagnostics.size() == 16u);
      for (const StepDiagnostics& s : tr.diagnostics) {
        CHECK(s.divergence_residual < 1e-9);
        if (is_helmholtz(kind)) CHECK(s.noise_orthogonality < 1e-9);
      }
    }
  }
}

TEST_CASE("Step-3 pressure identity is exact for scalar noise") {
  SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 6, 0.1);
  c.noise = NoiseKind::ScalarBM;
  c.potential_bc = PotentialBc::Natural;
  c.f = smooth_forcing;
  const Scheme scheme(std::make_shared<const Discretization>(c));
  const Discretization& d = scheme.discretization();
  SchemeState s = scheme.initial_state();
  // Start away from u = 0 so that xi is non-trivial.
  s.u = interpolate_vector(d.velocity(), [](const Point& x) { return Vec2(x.x() * (1 - x.x()), 2.0 * x.y()); });
  for (double dw : {0.3, -0.7}) {
    const Vector xi = scheme.helmholtz_step(s.u).xi;
    const SchemeState next = scheme.step(s, scalar_increment(dw));
    CHECK(bitwise_equal(next.xi, xi));
    CHECK(xi.cwiseAbs().maxCoeff() > 1e-3);
    for (int v = 0; v < d.mesh().n_vertices(); ++v) {
      const int i = d.pressure().node_dof(v);
      const int j = d.potential().node_dof(v);
      CHECK(next.p[i] == next.r[i] + xi[j] * (dw / c.k));
    }
    s = next;
  }
}

TEST_CASE("one step matches the dense oracle") {
  // Test-1 data at h = k = 1/5 from u0 = 0: B(0) = (1, 1) is constant, so with
  // a periodic potential eta = (1, 1) and the load is ((1, 1) dW(x) + k f, v).
  SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 5, 0.2);
  const Scheme scheme(std::make_shared<const Discretization>(c));
  const Discretization& d = scheme.discretization();
  NoiseIncrement inc;
  inc.spatial = true;
  inc.mode_coeffs.resize(16);
  for (int j = 0; j < 16; ++j) inc.mode_coeffs[j] = 0.05 * (j % 5) - 0.08;
  const double pi = std::numbers::pi;
  const auto dW = [&](const Point& x) {
    double v = 0.0;
    for (int j1 = 1; j1 <= 4; ++j1) {
      for (int j2 = 1; j2 <= 4; ++j2) {
        const double g = 2.0 * std::sin(j1 * pi * x.x()) * std::sin(j2 * pi * x.y());
        v += inc.mode_coeffs[(j1 - 1) * 4 + (j2 - 1)] * g / std::sqrt(j1 * j1 + j2 * j2);
      }
    }
    return v;
  };
  const SchemeState s1 = scheme.step(scheme.initial_state(), inc);
  const Vector rhs = oracle::vector_load(d.velocity(), [&](const Point& x) {
    const double w = dW(x);
    return Vec2(w + c.k, w + c.k);
  }, oracle::library_rule());
  const auto [u, r] = oracle::stokes_step(d.velocity(), d.pressure(), c.k, 0.0, rhs);
  CHECK(u.cwiseAbs().maxCoeff() > 1e-3);
  CHECK((s1.u - u).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s1.r - r).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("noise-free steps match the dense implicit Euler Stokes solve") {
  for (SchemeKind kind : {SchemeKind::MixedStandard, SchemeKind::StabilizedHelmholtz}) {
    CAPTURE(static_cast<int>(kind));
    SchemeConfig c;
    c.scheme = kind;
    c.m = 4;
    c.k = 0.1;
    c.f = smooth_forcing;
    c.u0 = [](const Point& x) { return Vec2(std::sin(3.0 * x.x()), x.y() * x.x()); };
    const Scheme scheme(std::make_shared<const Discretization>(c));
    const Discretization& d = scheme.discretization();
    SchemeState s = scheme.initial_state();
    Vector u = s.u;
    const oracle::Dense M = oracle::mass(d.velocity());
    for (int n = 0; n < 3; ++n) {
      const double t = (n + 1) * c.k;
      const Vector rhs = M * u + c.k * oracle::vector_load(d.velocity(), [&](const Point& x) { return smooth_forcing(t, x); });
      const auto [un, rn] = oracle::stokes_step(d.velocity(), d.pressure(), c.k, c.effective_eps(), rhs);
      s = scheme.step(s, scalar_increment(0.0));
      CHECK((s.u - un).cwiseAbs().maxCoeff() < 1e-11);
      CHECK((s.r - rn).cwiseAbs().maxCoeff() < 1e-10);
      u = un;
    }
  }
}

TEST_CASE("run_realization drives the steps with the coarsened path") {
  auto disc = std::make_shared<const Discretization>(test1_config(SchemeKind::MixedHelmholtz, 5, 0.25));
  const Scheme scheme(disc);
  SUBCASE("k equal to the master step") {
    const WienerPath path = WienerPath::sample(NoiseKind::TruncatedQW, 4, 0.25, 1.0, 17);
    const Trajectory tr = run_realization(disc, path);
    const CoarsePath cp = coarsen(path, 0.25);
    SchemeState s = scheme.initial_state();
    Vector r_sum = Vector::Zero(s.r.size());
    for (int n = 0; n < cp.steps(); ++n) {
      s = scheme.step(s, cp.increment(n));
      r_sum += s.r;
    }
    CHECK(bitwise_equal(tr.final.u, s.u));
    CHECK((tr.r_sum - 0.25 * r_sum).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("a single step") {
    SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 5, 1.0);
    auto d1 = std::make_shared<const Discretization>(c);
    const WienerPath path = WienerPath::sample(NoiseKind::TruncatedQW, 4, 0.25, 1.0, 17);
    const Trajectory tr = run_realization(d1, path);
    const SchemeState s = Scheme(d1).step(Scheme(d1).initial_state(), coarsen(path, 1.0).increment(0));
    CHECK(tr.steps == 1);
    CHECK(bitwise_equal(tr.final.u, s.u));
    CHECK(bitwise_equal(tr.p_sum, s.p));
  }
  SUBCASE("mismatched noise kinds are rejected") {
    const WienerPath path = WienerPath::sample(NoiseKind::ScalarBM, 1, 0.25, 1.0, 17);
    CHECK_THROWS_AS(run_realization(disc, path), ConfigError);
  }
}

TEST_CASE("non-finite values abort the realization") {
  SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 4, 0.25);
  c.B = [](const Vec2&) { return Vec2(std::numeric_limits<double>::quiet_NaN(), 0.0); };
  auto disc = std::make_shared<const Discretization>(c);
  const WienerPath path = WienerPath::sample(NoiseKind::TruncatedQW, 4, 0.25, 1.0, 1);
  CHECK_THROWS_AS(run_realization(disc, path), NumericalFailure);
}

TEST_CASE("cavity lid boundary values") {
  SchemeConfig c;
  c.scheme = SchemeKind::MixedHelmholtz;
  c.m = 4;
  c.k = 0.1;
  c.B = [](const Vec2&) { return Vec2(1.0, 1.0); };
  c.potential_bc = PotentialBc::Periodic;
  c.lid = [](const Point& x) {
    return (x.y() > 1.0 - 1e-12 && x.x() > 1e-12 && x.x() < 1.0 - 1e-12) ? Vec2(1.0, 0.0) : Vec2(0.0, 0.0);
  };
  auto disc = std::make_shared<const Discretization>(c);
  const Scheme scheme(disc);
  const SchemeState s = scheme.step(scheme.initial_state(), scalar_increment(0.1));
  const Vector full = disc->full_velocity(s.u);
  const FeSpace unc(disc->velocity().mesh_ptr(), ElementKind::VectorP2, Constraint::None);
  const int nn = unc.n_nodes();
  int top = 0;
  for (int n = 0; n < nn; ++n) {
    const Point x = unc.node_coord(n);
    if (x.y() == 1.0) {
      const bool corner = x.x() == 0.0 || x.x() == 1.0;
      CHECK(full[n] == (corner ? 0.0 : 1.0));
      CHECK(full[nn + n] == 0.0);
      top += !corner;
    } else if (x.y() == 0.0 || x.x() == 0.0 || x.x() == 1.0) {
      CHECK(full[n] == 0.0);
      CHECK(full[nn + n] == 0.0);
    }
  }
  CHECK(top == 7);
  // The interior responds to the moving lid.
  CHECK(s.u.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("Direct and SchurCg trajectories agree") {
  SchemeConfig c = test1_config(SchemeKind::MixedHelmholtz, 6, 0.125);
  auto a = std::make_shared<const Discretization>(c);
  c.solver = SaddleStrategy::SchurCg;
  auto b = std::make_shared<const Discretization>(c);
  const WienerPath path = WienerPath::sample(NoiseKind::TruncatedQW, 4, 0.125, 1.0, 23);
  const Trajectory ta = run_realization(a, path);
  const Trajectory tb = run_realization(b, path);
  CHECK((ta.final.u - tb.final.u).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((ta.p_sum - tb.p_sum).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("configuration errors") {
  SchemeConfig c;
  c.scheme = SchemeKind::StabilizedHelmholtz;
  c.eps = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.eps = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.eps.reset();
  CHECK(c.effective_eps() == doctest::Approx(c.h() * c.h()));
  c.scheme = SchemeKind::MixedHelmholtz;
  c.eps = 0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.eps.reset();
  c.k = 0.3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
