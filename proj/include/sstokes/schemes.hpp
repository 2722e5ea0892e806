#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "sstokes/assembly.hpp"
#include "sstokes/fem.hpp"
#include "sstokes/linsolve.hpp"
#include "sstokes/noise.hpp"

namespace sstokes {

/// MixedHelmholtz: Taylor-Hood P2/P1 with the gradient part of B(u) moved
/// into a stochastic pressure. MixedStandard: same spaces, plain
/// Euler-Maruyama noise load. Stabilized*: equal-order P1/P1 with the
/// pressure-Laplacian relaxation eps (grad r, grad q).
enum class SchemeKind { MixedHelmholtz, MixedStandard, StabilizedHelmholtz, StabilizedStandard };

/// Boundary treatment of the scalar potential xi: natural (pure Neumann,
/// mean-zero P1) or periodic P1.
enum class PotentialBc { Natural, Periodic };

inline bool is_mixed(SchemeKind s) { return s == SchemeKind::MixedHelmholtz || s == SchemeKind::MixedStandard; }
inline bool is_helmholtz(SchemeKind s) {
  return s == SchemeKind::MixedHelmholtz || s == SchemeKind::StabilizedHelmholtz;
}

using NoiseCoefficient = std::function<Vec2(const Vec2& u)>;
using Forcing = std::function<Vec2(double t, const Point& x)>;

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::MixedHelmholtz;
  int m = 8;  // cells per side, h = 1/m
  double k = 0.1;
  double T = 1.0;
  std::optional<double> eps;  // stabilized schemes default to h^2
  NoiseCoefficient B;         // empty: B = 0
  Forcing f;                  // empty: f = 0
  VectorFunction u0;          // empty: u0 = 0
  BcMode bc_mode = BcMode::Dirichlet;
  VectorFunction lid;  // non-homogeneous Dirichlet data on the boundary, Dirichlet mode only
  PotentialBc potential_bc = PotentialBc::Natural;
  NoiseKind noise = NoiseKind::ScalarBM;
  int J = 4;  // truncation level for TruncatedQW
  NoiseScaling noise_scaling = NoiseScaling::AsPrintedK;
  SaddleStrategy solver = SaddleStrategy::Direct;

  double h() const { return 1.0 / m; }
  double effective_eps() const;
  int steps() const;
  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

struct SchemeState {
  int n = 0;
  Vector u;   // velocity DOFs (constrained numbering)
  Vector r;   // deterministic pressure, zero mean
  Vector p;   // full pressure, zero mean
  Vector xi;  // potential used in the step that produced this state
};

struct StepDiagnostics {
  double divergence_residual = 0.0;  // max_q |(div u, q) + eps (grad r, grad q) - g_q|
  double noise_orthogonality = 0.0;  // max_phi |(eta, grad phi)|
  double dW_over_k_max = 0.0;
};

struct HelmholtzSplit {
  Vector xi;                // potential coefficients (potential space)
  std::vector<Vec2> B;      // B(u_h) at quadrature points
  std::vector<Vec2> eta;    // B(u_h) - grad xi_h at quadrature points
};

/// Everything about one (mesh, k) level that does not change between steps or
/// realizations: spaces, assembled blocks, factorizations, and quadrature
/// tables. Immutable after construction and shared by concurrent workers.
class Discretization {
 public:
  explicit Discretization(SchemeConfig config);

  const SchemeConfig& config() const { return config_; }
  const TriMesh& mesh() const { return *mesh_; }
  const FeSpace& velocity() const { return velocity_; }
  const FeSpace& pressure() const { return pressure_; }
  const FeSpace& potential() const { return potential_; }
  const BlockSystem& system() const { return *system_; }
  const SaddleSolver& saddle() const { return *saddle_; }
  const MeanZeroSolver& poisson() const { return *poisson_; }
  const SparseMat& potential_stiffness() const { return potential_stiffness_; }
  const Vector& lift_u() const { return lift_u_; }
  const Vector& lift_p() const { return lift_p_; }
  const std::vector<Point>& quad_points() const { return quad_points_; }
  bool has_lift() const { return static_cast<bool>(config_.lid); }

  /// Velocity (including boundary lift) at a point of triangle t.
  VectorSample velocity_at(const Vector& u, int t, const Barycentric& b) const;
  /// Full nodal velocity, unconstrained layout (component-major over all nodes).
  Vector full_velocity(const Vector& u) const;

  void noise_at_quadrature(const NoiseIncrement& inc, std::span<double> out) const;
  void noise_at_vertices(const NoiseIncrement& inc, std::span<double> out) const;

 private:
  SchemeConfig config_;
  std::shared_ptr<const TriMesh> mesh_;
  FeSpace velocity_;
  FeSpace pressure_;
  FeSpace potential_;
  std::optional<FeSpace> velocity_full_;
  std::shared_ptr<const BlockSystem> system_;
  std::unique_ptr<SaddleSolver> saddle_;
  std::unique_ptr<MeanZeroSolver> poisson_;
  SparseMat potential_stiffness_;
  Vector lift_full_;
  Vector lift_u_;
  Vector lift_p_;
  std::vector<Vec2> lift_quad_;
  std::vector<Point> quad_points_;
  std::vector<int> pressure_vertex_;  // one vertex per pressure DOF
  std::unique_ptr<ModeTable> quad_modes_;
  std::unique_ptr<ModeTable> vertex_modes_;

  friend class Scheme;
};

class Scheme {
 public:
  explicit Scheme(std::shared_ptr<const Discretization> disc);

  const Discretization& discretization() const { return *disc_; }

  SchemeState initial_state() const;

  /// Step 1: potential xi_h from (grad xi_h, grad phi) = (B(u_h), grad phi),
  /// and eta_h = B(u_h) - grad xi_h at the quadrature points.
  HelmholtzSplit helmholtz_step(const Vector& u) const;

  /// Advances state by one step with the given increment over
  /// [t_n, t_{n+1}]. Throws NumericalFailure on non-finite values.
  SchemeState step(const SchemeState& state, const NoiseIncrement& dW, StepDiagnostics* diag = nullptr) const;

 private:
  std::shared_ptr<const Discretization> disc_;
};

struct Trajectory {
  SchemeState final;
  Vector r_sum;  // k * sum_{n=1}^N r^n
  Vector p_sum;  // k * sum_{n=1}^N p^n
  std::vector<StepDiagnostics> diagnostics;
  std::uint64_t seed = 0;
  double k = 0.0;
  int steps = 0;
};

struct RunOptions {
  bool diagnostics = false;
  /// Called after every step (and once for the initial state).
  std::function<void(const SchemeState&, double t)> observer;
};

/// Runs the scheme over [0, T] driven by path (coarsened to the scheme's k).
Trajectory run_realization(std::shared_ptr<const Discretization> disc, const WienerPath& path,
                           const RunOptions& options = {});

/// Test-1 noise coefficient B(u) = (sqrt(u1^2 + 1), sqrt(u2^2 + 1)).
Vec2 test1_noise_coefficient(const Vec2& u);

}  // namespace sstokes
