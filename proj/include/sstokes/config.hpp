#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sstokes/mc.hpp"

namespace sstokes {

enum class Preset { Test1Temporal, Test1Spatial, Test2Cavity, Test3Stabilized, Custom };
enum class Scale { Desk, Full };

const char* to_string(Preset p);
Preset parse_preset(const std::string& s);
const char* to_string(Scale s);
Scale parse_scale(const std::string& s);
const char* to_string(SchemeKind s);
SchemeKind parse_scheme(const std::string& s);
const char* to_string(NoiseScaling s);
NoiseScaling parse_noise_scaling(const std::string& s);

/// Flat settings keyed "section.key". Serialized as an INI file with one
/// [section] block per prefix; values are kept verbatim, so a read/write cycle
/// is lossless.
class ConfigMap {
 public:
  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }
  void erase(const std::string& key) { entries_.erase(key); }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Keys of other that are missing here are copied in.
  void merge_defaults(const ConfigMap& other);

  static ConfigMap read_ini(std::istream& is);
  static ConfigMap read_file(const std::string& path);  // INI or JSON manifest
  void write_ini(std::ostream& os) const;

  bool operator==(const ConfigMap&) const = default;

 private:
  std::map<std::string, std::string> entries_;
};

/// Full parameter set of one preset at the given scale.
ConfigMap preset_defaults(Preset preset, Scale scale);

struct Diagnostic {
  enum class Severity { Error, Warning, Info };
  Severity severity = Severity::Error;
  std::string field;
  std::string message;
};

/// Checks a settings map without running anything: missing fields,
/// unparsable values, step-multiple constraints, mesh nesting, eps/scheme
/// consistency. The map is taken as-is (apply preset defaults first).
std::vector<Diagnostic> validate(const ConfigMap& map);

bool has_errors(const std::vector<Diagnostic>& diags);

struct ExperimentConfig {
  Preset preset = Preset::Custom;
  Scale scale = Scale::Desk;
  std::string output = "out";
  int workers = 1;
  std::uint64_t seed = 1;

  SchemeKind scheme = SchemeKind::MixedHelmholtz;
  std::string problem = "test1";  // test1 | cavity
  double T = 1.0;
  BcMode bc = BcMode::Dirichlet;
  PotentialBc potential_bc = PotentialBc::Natural;
  std::optional<double> eps;  // empty: h^2 for stabilized schemes
  SaddleStrategy solver = SaddleStrategy::Direct;

  NoiseKind noise = NoiseKind::TruncatedQW;
  int J = 4;
  NoiseScaling noise_scaling = NoiseScaling::AsPrintedK;

  std::string axis = "temporal";  // temporal | spatial | none
  int n_realizations = 1;
  int reference_m = 8;
  double reference_k = 0.1;
  std::vector<double> levels;  // k values (temporal) or h values (spatial)
  std::vector<ErrorKind> error_kinds;
  bool compare_standard = false;
  int snapshot_stride = 0;  // cavity dumps: 0 = final step only

  /// Scheme settings for one (m, k) level.
  SchemeConfig scheme_config(int m, double k) const;
  StudySpec study_spec() const;
  std::string label() const;
};

/// Validates and converts; throws ConfigError listing every error diagnostic.
ExperimentConfig resolve(const ConfigMap& map);

/// Settings map with preset defaults applied, as used by `run`.
ConfigMap with_defaults(ConfigMap map);

/// Parses "1/512" or a decimal.
double parse_step(const std::string& s);
/// Formats 1/n exactly when possible, otherwise with round-trip precision.
std::string format_step(double v);

}  // namespace sstokes
