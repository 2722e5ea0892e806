#include "sstokes/schemes.hpp"

#include <cmath>
#include <sstream>

#include "sstokes/errors.hpp"

namespace sstokes {

namespace {

BcMode mesh_mode(const SchemeConfig& c) {
  return (c.bc_mode == BcMode::Periodic || c.potential_bc == PotentialBc::Periodic) ? BcMode::Periodic
                                                                                    : BcMode::Dirichlet;
}

std::shared_ptr<const TriMesh> make_mesh(const SchemeConfig& c) {
  c.validate();
  return std::make_shared<const TriMesh>(TriMesh::build_uniform(c.m, mesh_mode(c)));
}

FeSpace velocity_space(const std::shared_ptr<const TriMesh>& mesh, const SchemeConfig& c) {
  const ElementKind kind = is_mixed(c.scheme) ? ElementKind::VectorP2 : ElementKind::VectorP1;
  return FeSpace(mesh, kind, c.bc_mode == BcMode::Periodic ? Constraint::Periodic : Constraint::DirichletZero);
}

FeSpace pressure_space(const std::shared_ptr<const TriMesh>& mesh, const SchemeConfig& c) {
  return FeSpace(mesh, ElementKind::ScalarP1,
                 c.bc_mode == BcMode::Periodic ? Constraint::Periodic : Constraint::ZeroMean);
}

FeSpace potential_space(const std::shared_ptr<const TriMesh>& mesh, const SchemeConfig& c) {
  return FeSpace(mesh, ElementKind::ScalarP1,
                 c.potential_bc == PotentialBc::Periodic ? Constraint::Periodic : Constraint::ZeroMean);
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

double SchemeConfig::effective_eps() const {
  if (is_mixed(scheme)) return 0.0;
  return eps.value_or(h() * h());
}

int SchemeConfig::steps() const { return static_cast<int>(std::lround(T / k)); }

void SchemeConfig::validate() const {
  std::ostringstream err;
  if (m < 2) err << "m must be >= 2; ";
  if (!(k > 0.0)) err << "k must be positive; ";
  if (!(T > 0.0)) err << "T must be positive; ";
  if (k > 0.0 && T > 0.0) {
    const double q = T / k;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q) || std::round(q) < 1.0) {
      err << "T is not an integer multiple of k; ";
    }
  }
  if (eps) {
    if (!(*eps >= 0.0)) err << "eps must be non-negative; ";
    if (is_mixed(scheme) && *eps != 0.0) err << "eps is only used by the stabilized schemes; ";
    if (!is_mixed(scheme) && *eps == 0.0) err << "stabilized schemes need eps > 0; ";
  }
  if (lid && bc_mode != BcMode::Dirichlet) err << "lid data requires Dirichlet boundary mode; ";
  if (noise == NoiseKind::TruncatedQW && J < 1) err << "J must be >= 1; ";
  const std::string s = err.str();
  if (!s.empty()) throw ConfigError("SchemeConfig: " + s.substr(0, s.size() - 2));
}

Discretization::Discretization(SchemeConfig config)
    : config_(std::move(config)),
      mesh_(make_mesh(config_)),
      velocity_(velocity_space(mesh_, config_)),
      pressure_(pressure_space(mesh_, config_)),
      potential_(potential_space(mesh_, config_)) {
  const SchemeConfig& c = config_;
  system_ = std::make_shared<const BlockSystem>(BlockSystem::assemble(velocity_, pressure_, c.k, c.effective_eps()));
  saddle_ = std::make_unique<SaddleSolver>(system_, c.solver);
  if (is_helmholtz(c.scheme)) {
    potential_stiffness_ = assemble_stiffness(potential_);
    poisson_ = std::make_unique<MeanZeroSolver>(potential_stiffness_, basis_integrals(potential_));
  }

  quad_points_ = quadrature_points(*mesh_);
  if (c.noise == NoiseKind::TruncatedQW) {
    quad_modes_ = std::make_unique<ModeTable>(c.J, quad_points_);
    vertex_modes_ = std::make_unique<ModeTable>(c.J, mesh_->vertices());
  }
  pressure_vertex_.assign(pressure_.n_dofs(), -1);
  for (int v = 0; v < mesh_->n_vertices(); ++v) {
    int& slot = pressure_vertex_[pressure_.node_dof(v)];
    if (slot < 0) slot = v;
  }

  lift_u_ = Vector::Zero(velocity_.n_dofs());
  lift_p_ = Vector::Zero(pressure_.n_dofs());
  if (c.lid) {
    velocity_full_.emplace(mesh_, velocity_.kind(), Constraint::None);
    const FeSpace& full = *velocity_full_;
    const int nn = full.n_nodes();
    const int nv = mesh_->n_vertices();
    lift_full_ = Vector::Zero(full.n_dofs());
    for (int n = 0; n < nn; ++n) {
      const std::uint8_t tags = n < nv ? mesh_->vertex_tags(n) : mesh_->edges()[n - nv].tags;
      if (tags == boundary::kInterior) continue;
      const Vec2 g = c.lid(full.node_coord(n));
      lift_full_[n] = g.x();
      lift_full_[nn + n] = g.y();
    }
    const Vector ag = assemble_stiffness(full) * lift_full_;
    for (int n = 0; n < nn; ++n) {
      for (int comp = 0; comp < 2; ++comp) {
        const int d = velocity_.dof(n, comp);
        if (d >= 0) lift_u_[d] -= c.k * ag[comp * nn + n];
      }
    }
    lift_p_ = -(assemble_divergence(full, pressure_) * lift_full_);
    lift_quad_.resize(quad_points_.size());
    eval_vector_at_quadrature(full, lift_full_, lift_quad_);
  }
}

VectorSample Discretization::velocity_at(const Vector& u, int t, const Barycentric& b) const {
  VectorSample s = evaluate_vector(velocity_, u, t, b);
  if (velocity_full_) {
    const VectorSample g = evaluate_vector(*velocity_full_, lift_full_, t, b);
    s.value += g.value;
    s.grad += g.grad;
  }
  return s;
}

Vector Discretization::full_velocity(const Vector& u) const {
  Vector out = expand(velocity_, u);
  if (velocity_full_) out += lift_full_;
  return out;
}

void Discretization::noise_at_quadrature(const NoiseIncrement& inc, std::span<double> out) const {
  if (inc.spatial) {
    if (!quad_modes_) throw ConfigError("Discretization: spatial noise increment on a scalar-noise level");
    quad_modes_->evaluate(inc, out);
  } else {
    std::fill(out.begin(), out.end(), inc.scalar);
  }
}

void Discretization::noise_at_vertices(const NoiseIncrement& inc, std::span<double> out) const {
  if (inc.spatial) {
    if (!vertex_modes_) throw ConfigError("Discretization: spatial noise increment on a scalar-noise level");
    vertex_modes_->evaluate(inc, out);
  } else {
    std::fill(out.begin(), out.end(), inc.scalar);
  }
}

Scheme::Scheme(std::shared_ptr<const Discretization> disc) : disc_(std::move(disc)) {
  if (!disc_) throw std::invalid_argument("Scheme: null discretization");
}

SchemeState Scheme::initial_state() const {
  const Discretization& d = *disc_;
  SchemeState s;
  s.u = d.config().u0 ? interpolate_vector(d.velocity(), d.config().u0) : Vector::Zero(d.velocity().n_dofs());
  s.r = Vector::Zero(d.pressure().n_dofs());
  s.p = Vector::Zero(d.pressure().n_dofs());
  s.xi = Vector::Zero(d.potential().n_dofs());
  return s;
}

HelmholtzSplit Scheme::helmholtz_step(const Vector& u) const {
  const Discretization& d = *disc_;
  const SchemeConfig& c = d.config();
  const std::size_t nq = d.quad_points_.size();

  HelmholtzSplit out;
  out.B.assign(nq, Vec2::Zero());
  if (c.B) {
    std::vector<Vec2> uq(nq);
    eval_vector_at_quadrature(d.velocity(), u, uq);
    if (d.has_lift()) {
      for (std::size_t q = 0; q < nq; ++q) uq[q] += d.lift_quad_[q];
    }
    for (std::size_t q = 0; q < nq; ++q) out.B[q] = c.B(uq[q]);
  }

  if (!is_helmholtz(c.scheme)) {
    out.xi = Vector::Zero(d.potential().n_dofs());
    out.eta = out.B;
    return out;
  }
  out.xi = d.poisson().solve(gradient_load(d.potential(), out.B));
  std::vector<Vec2> grad(nq);
  eval_gradient_at_quadrature(d.potential(), out.xi, grad);
  out.eta.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) out.eta[q] = out.B[q] - grad[q];
  return out;
}

SchemeState Scheme::step(const SchemeState& state, const NoiseIncrement& dW, StepDiagnostics* diag) const {
  const Discretization& d = *disc_;
  const SchemeConfig& c = d.config();
  const double k = c.k;
  const double t1 = (state.n + 1) * k;
  const std::size_t nq = d.quad_points_.size();

  HelmholtzSplit split = helmholtz_step(state.u);

  std::vector<double> wq(nq);
  d.noise_at_quadrature(dW, wq);
  std::vector<Vec2> load(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    load[q] = wq[q] * split.eta[q];
    if (c.f) load[q] += k * c.f(t1, d.quad_points_[q]);
  }
  const Vector rhs_u = d.system().M * state.u + vector_load(d.velocity(), load) + d.lift_u_;

  SchemeState next;
  next.n = state.n + 1;
  std::tie(next.u, next.r) = d.saddle().solve(rhs_u, d.lift_p_);
  next.xi = std::move(split.xi);

  if (is_helmholtz(c.scheme)) {
    const TriMesh& mesh = d.mesh();
    std::vector<double> wv(mesh.n_vertices());
    d.noise_at_vertices(dW, wv);
    next.p.resize(next.r.size());
    for (Eigen::Index i = 0; i < next.r.size(); ++i) {
      const int v = d.pressure_vertex_[i];
      const double a = wv[v] / k;
      next.p[i] = next.r[i] + next.xi[d.potential().node_dof(v)] * a;
    }
    if (dW.spatial) next.p = zero_mean(d.pressure(), std::move(next.p));
  } else {
    next.p = next.r;
  }

  if (!next.u.allFinite() || !next.r.allFinite() || !next.p.allFinite() || !next.xi.allFinite()) {
    throw NumericalFailure("non-finite values produced");
  }

  if (diag) {
    const BlockSystem& s = d.system();
    Vector div = s.Bdiv * next.u - d.lift_p_;
    if (s.eps != 0.0) div += s.eps * (s.L * next.r);
    diag->divergence_residual = max_abs(div);
    diag->noise_orthogonality = is_helmholtz(c.scheme) ? max_abs(gradient_load(d.potential(), split.eta)) : 0.0;
    double wmax = 0.0;
    for (double w : wq) wmax = std::max(wmax, std::abs(w));
    diag->dW_over_k_max = wmax / k;
  }
  return next;
}

Trajectory run_realization(std::shared_ptr<const Discretization> disc, const WienerPath& path,
                           const RunOptions& options) {
  if (!disc) throw std::invalid_argument("run_realization: null discretization");
  const SchemeConfig& c = disc->config();
  if (path.kind() != c.noise || (c.noise == NoiseKind::TruncatedQW && path.J() != c.J)) {
    throw ConfigError("run_realization: path noise kind or truncation level does not match the scheme");
  }
  const CoarsePath coarse(path, c.k, c.noise_scaling);
  if (coarse.steps() != c.steps()) {
    throw ConfigError("run_realization: path horizon does not match the scheme's T");
  }

  const Scheme scheme(disc);
  Trajectory tr;
  tr.seed = path.seed();
  tr.k = c.k;
  tr.steps = coarse.steps();
  SchemeState state = scheme.initial_state();
  tr.r_sum = Vector::Zero(state.r.size());
  tr.p_sum = Vector::Zero(state.p.size());
  if (options.observer) options.observer(state, 0.0);
  if (options.diagnostics) tr.diagnostics.reserve(tr.steps);

  for (int n = 0; n < tr.steps; ++n) {
    StepDiagnostics diag;
    try {
      state = scheme.step(state, coarse.increment(n), options.diagnostics ? &diag : nullptr);
    } catch (const NumericalFailure& e) {
      std::ostringstream msg;
      msg << "realization aborted at step " << n + 1 << " (t = " << (n + 1) * c.k << ", seed " << path.seed()
          << "): " << e.what();
      throw NumericalFailure(msg.str());
    }
    if (options.diagnostics) tr.diagnostics.push_back(diag);
    tr.r_sum += state.r;
    tr.p_sum += state.p;
    if (options.observer) options.observer(state, (n + 1) * c.k);
  }
  tr.r_sum *= c.k;
  tr.p_sum *= c.k;
  tr.final = std::move(state);
  return tr;
}

Vec2 test1_noise_coefficient(const Vec2& u) {
  return {std::sqrt(u.x() * u.x() + 1.0), std::sqrt(u.y() * u.y() + 1.0)};
}

}  // namespace sstokes
