#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sstokes/mesh.hpp"

namespace sstokes {

enum class NoiseKind { ScalarBM, TruncatedQW };

/// Amplitude of a truncated Q-Wiener increment built from the summed master
/// normals S of a step: AsPrintedK uses k * S, SqrtK uses sqrt(master_k) * S,
/// which is the sum of the master Brownian increments.
enum class NoiseScaling { AsPrintedK, SqrtK };

/// lambda_{j1 j2} = 1 / (j1^2 + j2^2)
double qw_eigenvalue(int j1, int j2);
/// g_{j1 j2}(x) = 2 sin(j1 pi x1) sin(j2 pi x2)
double qw_eigenfunction(int j1, int j2, const Point& x);

/// One realization of the driving noise on the finest (master) time grid.
///
/// Master data are stored on a dyadic lattice of spacing 2^-30, so sums of
/// master values over any grouping are exact in double precision and
/// coarsened increments telescope bitwise. ScalarBM stores the increments
/// themselves (~ N(0, master_k)); TruncatedQW stores J*J standard normals per
/// step, ordered j1-major.
///
/// Normals are drawn from a std::mt19937_64 keyed by (seed, step), so any
/// step can be regenerated independently of execution order.
class WienerPath {
 public:
  /// Throws ConfigError when T / master_k is not an integer.
  static WienerPath sample(NoiseKind kind, int J, double master_k, double T, std::uint64_t seed);

  NoiseKind kind() const { return kind_; }
  int J() const { return J_; }
  int modes() const { return kind_ == NoiseKind::ScalarBM ? 1 : J_ * J_; }
  double master_k() const { return master_k_; }
  double T() const { return T_; }
  int n_master_steps() const { return n_steps_; }
  std::uint64_t seed() const { return seed_; }

  /// Master values of step n (one scalar increment, or J*J normals).
  std::span<const double> master(int n) const;

 private:
  NoiseKind kind_ = NoiseKind::ScalarBM;
  int J_ = 1;
  double master_k_ = 0.0;
  double T_ = 0.0;
  int n_steps_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> data_;
};

/// Noise increment over one step: spatially constant (ScalarBM) or
/// dW(x) = sum_j coeff_j * sqrt(lambda_j) * g_j(x) (TruncatedQW).
struct NoiseIncrement {
  bool spatial = false;
  double scalar = 0.0;
  std::vector<double> mode_coeffs;

  double at(const Point& x, int J) const;
};

/// View of a WienerPath on a grid of step k = ratio * master_k.
///
/// Step n aggregates master steps [n*ratio, (n+1)*ratio), summed left to
/// right. The TruncatedQW increment is the mode expansion with coefficients
/// amplitude * S_j, S_j the exact sum of the master normals of mode j.
class CoarsePath {
 public:
  CoarsePath(const WienerPath& path, double k, NoiseScaling scaling = NoiseScaling::AsPrintedK);

  const WienerPath& path() const { return *path_; }
  double k() const { return k_; }
  int ratio() const { return ratio_; }
  int steps() const { return steps_; }
  NoiseScaling scaling() const { return scaling_; }

  /// Exact sum of the master values in coarse step n (length modes()).
  std::vector<double> master_sums(int n) const;

  /// Increment over [t_n, t_{n+1}], n zero-based.
  NoiseIncrement increment(int n) const;

 private:
  const WienerPath* path_;
  double k_;
  int ratio_;
  int steps_;
  NoiseScaling scaling_;
};

/// Throws ConfigError when k is not an integer multiple of the master step.
CoarsePath coarsen(const WienerPath& path, double k, NoiseScaling scaling = NoiseScaling::AsPrintedK);

/// Value of the step-n increment at x.
double increment_field(const CoarsePath& path, int n, const Point& x);

/// sqrt(lambda_j) g_j precomputed at a fixed point set, so that dW at every
/// point costs one dense mat-vec per step.
class ModeTable {
 public:
  ModeTable(int J, std::span<const Point> points);
  int J() const { return J_; }
  std::size_t n_points() const { return n_points_; }
  /// out[p] = increment value at point p
  void evaluate(const NoiseIncrement& inc, std::span<double> out) const;

 private:
  int J_;
  std::size_t n_points_;
  std::vector<double> table_;  // point-major, J*J per point
};

}  // namespace sstokes
