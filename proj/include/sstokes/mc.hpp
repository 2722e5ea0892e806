#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "sstokes/schemes.hpp"

namespace sstokes {

enum class StudyAxis { Temporal, Spatial };
enum class ErrorKind { U_L2, U_H1, R_avg, P_avg, R_final, P_final };
inline constexpr int kErrorKinds = 6;

const char* to_string(ErrorKind kind);
ErrorKind parse_error_kind(const std::string& name);

/// One fine solution and one coarse solution driven by the same path.
struct Solution {
  const Discretization* disc = nullptr;
  const Trajectory* trajectory = nullptr;
};

enum class VelocityNorm { L2, H1 };

/// ||u_ref - u_trial|| at the final time, with the trial solution evaluated at
/// the reference mesh's quadrature points. H1 is the gradient seminorm.
/// Throws ConfigError when the two trajectories were driven by different paths.
double error_u(const Solution& trial, const Solution& reference, VelocityNorm norm);

enum class PressureSum { R, P };
/// ||k0 sum p(k0) - k sum p(k)||_{L2}
double error_p_avg(const Solution& trial, const Solution& reference, PressureSum which);

/// All six functionals at once (one pass over the reference quadrature).
std::array<double, kErrorKinds> error_all(const Solution& trial, const Solution& reference);

/// order_i = ln(e_i / e_{i+1}) / ln(s_i / s_{i+1}). Throws std::invalid_argument
/// for fewer than two levels or non-positive errors.
std::vector<double> fit_orders(const std::vector<double>& errors, const std::vector<double>& steps);

/// Least-squares slope of ln(e) against ln(s).
double fitted_order(const std::vector<double>& errors, const std::vector<double>& steps);

struct StudySpec {
  std::string label = "study";
  StudyAxis axis = StudyAxis::Temporal;
  SchemeConfig reference;
  std::vector<SchemeConfig> levels;  // coarsest first
  int n_realizations = 1;
  std::uint64_t seed_base = 0;
  std::vector<ErrorKind> error_kinds{ErrorKind::U_L2, ErrorKind::U_H1, ErrorKind::R_avg, ErrorKind::P_avg};
  int workers = 1;

  /// Throws ConfigError when levels are incompatible with the reference.
  void validate() const;
};

struct LevelResult {
  double step = 0.0;  // k (temporal) or h (spatial)
  std::array<double, kErrorKinds> rms{};
  std::array<double, kErrorKinds> std_error{};  // standard error of the RMS estimate
};

struct ErrorReport {
  std::string label;
  StudyAxis axis = StudyAxis::Temporal;
  std::vector<ErrorKind> error_kinds;
  std::vector<LevelResult> levels;
  int n_realizations = 0;
  std::uint64_t seed_base = 0;
  double wall_seconds = 0.0;

  std::vector<double> errors(ErrorKind kind) const;
  std::vector<double> steps() const;
  /// Pairwise orders between consecutive levels.
  std::vector<double> orders(ErrorKind kind) const;
};

/// Runs every realization on the reference and on every level with the same
/// path. Realizations are spread over spec.workers threads; the reduction is
/// performed in realization order, so results do not depend on scheduling.
ErrorReport run_study(const StudySpec& spec);

struct ComparisonReport {
  ErrorReport helmholtz;
  ErrorReport standard;
};

/// Runs spec twice, with StabilizedHelmholtz and StabilizedStandard on every
/// level and on the reference, using identical seeds, meshes and steps.
ComparisonReport compare_stabilization(StudySpec spec);

/// Columns level,step_size,error_kind,rms_error,order. Level 0 has an empty order.
void write_csv(const ErrorReport& report, std::ostream& os);

/// Realization seed for index l.
inline std::uint64_t realization_seed(std::uint64_t seed_base, int l) { return seed_base + static_cast<std::uint64_t>(l); }

}  // namespace sstokes
