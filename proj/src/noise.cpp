#include "sstokes/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sstokes/errors.hpp"

namespace sstokes {

namespace {

constexpr int kLatticeBits = 30;

double to_lattice(double x) { return std::ldexp(std::nearbyint(std::ldexp(x, kLatticeBits)), -kLatticeBits); }

int integer_ratio(double num, double den, const char* what) {
  if (!(num > 0.0) || !(den > 0.0)) {
    throw ConfigError(std::string(what) + ": step sizes and horizons must be positive");
  }
  const double q = num / den;
  const double r = std::round(q);
  if (r < 1.0 || std::abs(q - r) > 1e-9 * std::max(1.0, r)) {
    std::ostringstream msg;
    msg << what << ": " << num << " is not an integer multiple of " << den;
    throw ConfigError(msg.str());
  }
  return static_cast<int>(r);
}

}  // namespace

double qw_eigenvalue(int j1, int j2) { return 1.0 / static_cast<double>(j1 * j1 + j2 * j2); }

double qw_eigenfunction(int j1, int j2, const Point& x) {
  return 2.0 * std::sin(j1 * std::numbers::pi * x.x()) * std::sin(j2 * std::numbers::pi * x.y());
}

WienerPath WienerPath::sample(NoiseKind kind, int J, double master_k, double T, std::uint64_t seed) {
  if (kind == NoiseKind::TruncatedQW && J < 1) throw ConfigError("WienerPath: truncation level J must be >= 1");
  WienerPath path;
  path.kind_ = kind;
  path.J_ = kind == NoiseKind::ScalarBM ? 1 : J;
  path.master_k_ = master_k;
  path.T_ = T;
  path.n_steps_ = integer_ratio(T, master_k, "WienerPath::sample");
  path.seed_ = seed;

  const int per_step = path.modes();
  const double scale = kind == NoiseKind::ScalarBM ? std::sqrt(master_k) : 1.0;
  path.data_.resize(static_cast<std::size_t>(path.n_steps_) * per_step);
  for (int n = 0; n < path.n_steps_; ++n) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(per_step)};
    std::mt19937_64 engine(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < per_step; ++j) {
      path.data_[static_cast<std::size_t>(n) * per_step + j] = to_lattice(scale * normal(engine));
    }
  }
  return path;
}

std::span<const double> WienerPath::master(int n) const {
  if (n < 0 || n >= n_steps_) throw std::out_of_range("WienerPath::master: step out of range");
  const std::size_t per_step = modes();
  return {data_.data() + n * per_step, per_step};
}

double NoiseIncrement::at(const Point& x, int J) const {
  if (!spatial) return scalar;
  double v = 0.0;
  for (int j1 = 1; j1 <= J; ++j1) {
    for (int j2 = 1; j2 <= J; ++j2) {
      v += mode_coeffs[(j1 - 1) * J + (j2 - 1)] * std::sqrt(qw_eigenvalue(j1, j2)) * qw_eigenfunction(j1, j2, x);
    }
  }
  return v;
}

CoarsePath::CoarsePath(const WienerPath& path, double k, NoiseScaling scaling)
    : path_(&path),
      k_(k),
      ratio_(integer_ratio(k, path.master_k(), "coarsen")),
      steps_(path.n_master_steps() / ratio_),
      scaling_(scaling) {
  if (steps_ * ratio_ != path.n_master_steps()) {
    throw ConfigError("coarsen: step does not divide the time horizon");
  }
}

std::vector<double> CoarsePath::master_sums(int n) const {
  if (n < 0 || n >= steps_) throw std::out_of_range("CoarsePath: step out of range");
  std::vector<double> sums(path_->modes(), 0.0);
  for (int i = n * ratio_; i < (n + 1) * ratio_; ++i) {
    const auto m = path_->master(i);
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += m[j];
  }
  return sums;
}

NoiseIncrement CoarsePath::increment(int n) const {
  std::vector<double> sums = master_sums(n);
  NoiseIncrement inc;
  if (path_->kind() == NoiseKind::ScalarBM) {
    inc.scalar = sums[0];
    return inc;
  }
  inc.spatial = true;
  const double factor = scaling_ == NoiseScaling::AsPrintedK ? k_ : std::sqrt(path_->master_k());
  for (double& s : sums) s *= factor;
  inc.mode_coeffs = std::move(sums);
  return inc;
}

CoarsePath coarsen(const WienerPath& path, double k, NoiseScaling scaling) { return CoarsePath(path, k, scaling); }

double increment_field(const CoarsePath& path, int n, const Point& x) {
  return path.increment(n).at(x, path.path().J());
}

ModeTable::ModeTable(int J, std::span<const Point> points) : J_(J), n_points_(points.size()) {
  const int nm = J * J;
  table_.resize(n_points_ * nm);
  for (std::size_t p = 0; p < n_points_; ++p) {
    for (int j1 = 1; j1 <= J; ++j1) {
      for (int j2 = 1; j2 <= J; ++j2) {
        table_[p * nm + (j1 - 1) * J + (j2 - 1)] =
            std::sqrt(qw_eigenvalue(j1, j2)) * qw_eigenfunction(j1, j2, points[p]);
      }
    }
  }
}

void ModeTable::evaluate(const NoiseIncrement& inc, std::span<double> out) const {
  if (!inc.spatial) {
    std::fill(out.begin(), out.end(), inc.scalar);
    return;
  }
  const int nm = J_ * J_;
  for (std::size_t p = 0; p < n_points_; ++p) {
    double v = 0.0;
    for (int j = 0; j < nm; ++j) v += table_[p * nm + j] * inc.mode_coeffs[j];
    out[p] = v;
  }
}

}  // namespace sstokes
