#include "sstokes/mc.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sstokes/errors.hpp"

namespace sstokes {

namespace {

constexpr std::array<const char*, kErrorKinds> kKindNames{"u_l2", "u_h1", "r_avg", "p_avg", "r_final", "p_final"};

void check_pair(const Solution& trial, const Solution& reference) {
  if (!trial.disc || !trial.trajectory || !reference.disc || !reference.trajectory) {
    throw std::invalid_argument("error functional: incomplete solution");
  }
  if (trial.trajectory->seed != reference.trajectory->seed) {
    std::ostringstream msg;
    msg << "error functional: trial and reference were driven by different paths (seeds "
        << trial.trajectory->seed << " and " << reference.trajectory->seed << ")";
    throw ConfigError(msg.str());
  }
}

bool is_temporal_match(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

const char* to_string(ErrorKind kind) { return kKindNames[static_cast<int>(kind)]; }

ErrorKind parse_error_kind(const std::string& name) {
  for (int i = 0; i < kErrorKinds; ++i) {
    if (name == kKindNames[i]) return static_cast<ErrorKind>(i);
  }
  throw ConfigError("unknown error kind '" + name + "'");
}

std::array<double, kErrorKinds> error_all(const Solution& trial, const Solution& reference) {
  check_pair(trial, reference);
  const Discretization& rd = *reference.disc;
  const Discretization& td = *trial.disc;
  const Trajectory& rt = *reference.trajectory;
  const Trajectory& tt = *trial.trajectory;
  const TriMesh& rmesh = rd.mesh();
  const TriMesh& tmesh = td.mesh();
  const Quadrature& quad = Quadrature::degree4();
  const bool same_mesh = &rmesh == &tmesh || rmesh.cells_per_side() == tmesh.cells_per_side();

  std::array<double, kErrorKinds> sq{};
  for (int t = 0; t < rmesh.n_triangles(); ++t) {
    const TriangleGeometry geo = TriangleGeometry::of(rmesh, t);
    const double jac = 2.0 * geo.area;
    for (int q = 0; q < quad.size(); ++q) {
      const Barycentric& b = quad.points[q];
      const double w = quad.weights[q] * jac;
      int tt_idx = t;
      Barycentric tb = b;
      if (!same_mesh) {
        const Point x = geo.map(b);
        tt_idx = tmesh.locate(x);
        tb = tmesh.barycentric(tt_idx, x);
      }
      const VectorSample ur = rd.velocity_at(rt.final.u, t, b);
      const VectorSample ut = td.velocity_at(tt.final.u, tt_idx, tb);
      sq[0] += w * (ur.value - ut.value).squaredNorm();
      sq[1] += w * (ur.grad - ut.grad).squaredNorm();

      const std::array<const Vector*, 4> rv{&rt.r_sum, &rt.p_sum, &rt.final.r, &rt.final.p};
      const std::array<const Vector*, 4> tv{&tt.r_sum, &tt.p_sum, &tt.final.r, &tt.final.p};
      for (int i = 0; i < 4; ++i) {
        const double d = evaluate_scalar(rd.pressure(), *rv[i], t, b).value -
                         evaluate_scalar(td.pressure(), *tv[i], tt_idx, tb).value;
        sq[2 + i] += w * d * d;
      }
    }
  }
  std::array<double, kErrorKinds> out{};
  for (int i = 0; i < kErrorKinds; ++i) out[i] = std::sqrt(sq[i]);
  return out;
}

double error_u(const Solution& trial, const Solution& reference, VelocityNorm norm) {
  const auto e = error_all(trial, reference);
  return norm == VelocityNorm::L2 ? e[0] : e[1];
}

double error_p_avg(const Solution& trial, const Solution& reference, PressureSum which) {
  const auto e = error_all(trial, reference);
  return which == PressureSum::R ? e[2] : e[3];
}

std::vector<double> fit_orders(const std::vector<double>& errors, const std::vector<double>& steps) {
  if (errors.size() != steps.size()) throw std::invalid_argument("fit_orders: size mismatch");
  if (errors.size() < 2) throw std::invalid_argument("fit_orders: need at least two levels");
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) throw std::invalid_argument("fit_orders: errors must be strictly positive");
    if (!(steps[i] > 0.0)) throw std::invalid_argument("fit_orders: steps must be strictly positive");
  }
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(steps[i] / steps[i + 1]));
  }
  return orders;
}

double fitted_order(const std::vector<double>& errors, const std::vector<double>& steps) {
  fit_orders(errors, steps);
  const double n = static_cast<double>(errors.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double x = std::log(steps[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void StudySpec::validate() const {
  reference.validate();
  if (levels.empty()) throw ConfigError("StudySpec: no trial levels");
  if (n_realizations < 1) throw ConfigError("StudySpec: need at least one realization");
  if (workers < 1) throw ConfigError("StudySpec: worker count must be >= 1");
  for (const SchemeConfig& l : levels) {
    l.validate();
    if (!is_temporal_match(l.T, reference.T)) throw ConfigError("StudySpec: levels must share the reference T");
    if (l.noise != reference.noise || l.J != reference.J) {
      throw ConfigError("StudySpec: levels must share the reference noise model");
    }
    const double q = l.k / reference.k;
    if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q)) {
      throw ConfigError("StudySpec: trial step is not an integer multiple of the reference step");
    }
    if (axis == StudyAxis::Spatial && !is_temporal_match(l.k, reference.k)) {
      throw ConfigError("StudySpec: spatial levels must use the reference time step");
    }
    if (axis == StudyAxis::Temporal && l.m != reference.m) {
      throw ConfigError("StudySpec: temporal levels must use the reference mesh");
    }
  }
}

std::vector<double> ErrorReport::errors(ErrorKind kind) const {
  std::vector<double> out;
  for (const LevelResult& l : levels) out.push_back(l.rms[static_cast<int>(kind)]);
  return out;
}

std::vector<double> ErrorReport::steps() const {
  std::vector<double> out;
  for (const LevelResult& l : levels) out.push_back(l.step);
  return out;
}

std::vector<double> ErrorReport::orders(ErrorKind kind) const {
  const std::vector<double> e = errors(kind);
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (e[i] > 0.0 && e[i + 1] > 0.0) {
      out.push_back(std::log(e[i] / e[i + 1]) / std::log(levels[i].step / levels[i + 1].step));
    } else {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

ErrorReport run_study(const StudySpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  const auto reference = std::make_shared<const Discretization>(spec.reference);
  std::vector<std::shared_ptr<const Discretization>> levels;
  for (const SchemeConfig& c : spec.levels) levels.push_back(std::make_shared<const Discretization>(c));

  const int n_levels = static_cast<int>(levels.size());
  const int np = spec.n_realizations;
  // errors[(l * n_levels + i) * kErrorKinds + j]
  std::vector<double> errors(static_cast<std::size_t>(np) * n_levels * kErrorKinds, 0.0);

  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (;;) {
      const int l = next.fetch_add(1);
      if (l >= np || failed.load()) return;
      try {
        const WienerPath path = WienerPath::sample(spec.reference.noise, spec.reference.J, spec.reference.k,
                                                   spec.reference.T, realization_seed(spec.seed_base, l));
        const Trajectory ref_tr = run_realization(reference, path);
        for (int i = 0; i < n_levels; ++i) {
          const Trajectory tr = run_realization(levels[i], path);
          const auto e = error_all({levels[i].get(), &tr}, {reference.get(), &ref_tr});
          for (int j = 0; j < kErrorKinds; ++j) errors[(static_cast<std::size_t>(l) * n_levels + i) * kErrorKinds + j] = e[j];
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const int n_workers = std::min(spec.workers, np);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ErrorReport report;
  report.label = spec.label;
  report.axis = spec.axis;
  report.error_kinds = spec.error_kinds;
  report.n_realizations = np;
  report.seed_base = spec.seed_base;
  for (int i = 0; i < n_levels; ++i) {
    LevelResult res;
    res.step = spec.axis == StudyAxis::Temporal ? spec.levels[i].k : spec.levels[i].h();
    for (int j = 0; j < kErrorKinds; ++j) {
      double sum = 0.0;
      for (int l = 0; l < np; ++l) {
        const double e = errors[(static_cast<std::size_t>(l) * n_levels + i) * kErrorKinds + j];
        sum += e * e;
      }
      const double mean = sum / np;
      res.rms[j] = std::sqrt(mean);
      if (np > 1 && mean > 0.0) {
        double var = 0.0;
        for (int l = 0; l < np; ++l) {
          const double e = errors[(static_cast<std::size_t>(l) * n_levels + i) * kErrorKinds + j];
          var += (e * e - mean) * (e * e - mean);
        }
        var /= (np - 1);
        res.std_error[j] = std::sqrt(var / np) / (2.0 * res.rms[j]);
      }
    }
    report.levels.push_back(res);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ComparisonReport compare_stabilization(StudySpec spec) {
  const auto with_scheme = [&](SchemeKind kind, const char* suffix) {
    StudySpec s = spec;
    s.label = spec.label + suffix;
    s.reference.scheme = kind;
    for (SchemeConfig& c : s.levels) c.scheme = kind;
    return run_study(s);
  };
  ComparisonReport out;
  out.helmholtz = with_scheme(SchemeKind::StabilizedHelmholtz, "_helmholtz");
  out.standard = with_scheme(SchemeKind::StabilizedStandard, "_standard");
  return out;
}

void write_csv(const ErrorReport& report, std::ostream& os) {
  os << "level,step_size,error_kind,rms_error,order\n";
  std::vector<std::vector<double>> orders;
  for (ErrorKind kind : report.error_kinds) orders.push_back(report.orders(kind));
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    for (std::size_t j = 0; j < report.error_kinds.size(); ++j) {
      const ErrorKind kind = report.error_kinds[j];
      line.str("");
      line << i << ',' << report.levels[i].step << ',' << to_string(kind) << ','
           << report.levels[i].rms[static_cast<int>(kind)] << ',';
      if (i > 0) line << orders[j][i - 1];
      os << line.str() << '\n';
    }
  }
}

}  // namespace sstokes
