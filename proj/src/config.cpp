#include "sstokes/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "sstokes/errors.hpp"

namespace sstokes {

namespace {

template <typename Enum, std::size_t N>
const char* name_of(Enum value, const std::array<std::pair<Enum, const char*>, N>& table) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum value_of(const std::string& name, const std::array<std::pair<Enum, const char*>, N>& table, const char* what) {
  for (const auto& [e, n] : table) {
    if (name == n) return e;
  }
  std::string choices;
  for (const auto& [e, n] : table) choices += (choices.empty() ? "" : ", ") + std::string(n);
  throw ConfigError(std::string("unknown ") + what + " '" + name + "' (expected one of: " + choices + ")");
}

const std::array<std::pair<Preset, const char*>, 5> kPresets{{{Preset::Test1Temporal, "test1-temporal"},
                                                              {Preset::Test1Spatial, "test1-spatial"},
                                                              {Preset::Test2Cavity, "test2-cavity"},
                                                              {Preset::Test3Stabilized, "test3-stabilized"},
                                                              {Preset::Custom, "custom"}}};
const std::array<std::pair<Scale, const char*>, 2> kScales{{{Scale::Desk, "desk"}, {Scale::Full, "full"}}};
const std::array<std::pair<SchemeKind, const char*>, 4> kSchemes{
    {{SchemeKind::MixedHelmholtz, "mixed-helmholtz"},
     {SchemeKind::MixedStandard, "mixed-standard"},
     {SchemeKind::StabilizedHelmholtz, "stabilized-helmholtz"},
     {SchemeKind::StabilizedStandard, "stabilized-standard"}}};
const std::array<std::pair<NoiseScaling, const char*>, 2> kScalings{
    {{NoiseScaling::AsPrintedK, "as-printed-k"}, {NoiseScaling::SqrtK, "sqrt-k"}}};
const std::array<std::pair<NoiseKind, const char*>, 2> kNoise{
    {{NoiseKind::ScalarBM, "scalar"}, {NoiseKind::TruncatedQW, "qw"}}};
const std::array<std::pair<BcMode, const char*>, 2> kBc{{{BcMode::Dirichlet, "dirichlet"}, {BcMode::Periodic, "periodic"}}};
const std::array<std::pair<PotentialBc, const char*>, 2> kPotentialBc{
    {{PotentialBc::Natural, "natural"}, {PotentialBc::Periodic, "periodic"}}};
const std::array<std::pair<SaddleStrategy, const char*>, 2> kSolvers{
    {{SaddleStrategy::Direct, "direct"}, {SaddleStrategy::SchurCg, "schur-cg"}}};

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("'" + s + "' is not an integer");
  }
  if (pos != s.size()) throw ConfigError("'" + s + "' is not an integer");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("'" + s + "' is not an unsigned integer");
  }
  if (pos != s.size()) throw ConfigError("'" + s + "' is not an unsigned integer");
  return v;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("'" + s + "' is not a number");
  }
  if (pos != s.size()) throw ConfigError("'" + s + "' is not a number");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + s + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

bool is_integer_ratio(double num, double den) {
  const double q = num / den;
  return std::round(q) >= 1.0 && std::abs(q - std::round(q)) <= 1e-9 * std::max(1.0, q);
}

// Every key read by resolve(), with whether it is required.
struct KeySpec {
  const char* key;
  bool required;
};
const std::array<KeySpec, 23> kKeys{{{"experiment.preset", false},
                                     {"experiment.scale", false},
                                     {"experiment.output", false},
                                     {"experiment.workers", false},
                                     {"experiment.seed", true},
                                     {"scheme.name", true},
                                     {"scheme.problem", true},
                                     {"scheme.T", true},
                                     {"scheme.bc", false},
                                     {"scheme.potential_bc", false},
                                     {"scheme.eps", false},
                                     {"scheme.solver", false},
                                     {"noise.kind", true},
                                     {"noise.J", false},
                                     {"noise.scaling", false},
                                     {"study.axis", true},
                                     {"study.np", true},
                                     {"study.reference_m", true},
                                     {"study.reference_k", true},
                                     {"study.levels", false},
                                     {"study.kinds", false},
                                     {"study.compare_standard", false},
                                     {"output.snapshot_stride", false}}};

ConfigMap base_map(const char* preset, const char* scale) {
  ConfigMap m;
  m.set("experiment.preset", preset);
  m.set("experiment.scale", scale);
  m.set("experiment.output", std::string("out/") + preset);
  m.set("experiment.workers", "1");
  m.set("experiment.seed", "20240601");
  m.set("scheme.name", "mixed-helmholtz");
  m.set("scheme.problem", "test1");
  m.set("scheme.T", "1");
  m.set("scheme.bc", "dirichlet");
  m.set("scheme.potential_bc", "periodic");
  m.set("scheme.eps", "none");
  m.set("scheme.solver", "direct");
  m.set("noise.kind", "qw");
  m.set("noise.J", "4");
  m.set("noise.scaling", "as-printed-k");
  m.set("study.kinds", "u_l2,u_h1,r_avg,p_avg,r_final,p_final");
  m.set("study.compare_standard", "false");
  m.set("output.snapshot_stride", "0");
  return m;
}

}  // namespace

const char* to_string(Preset p) { return name_of(p, kPresets); }
Preset parse_preset(const std::string& s) { return value_of(s, kPresets, "preset"); }
const char* to_string(Scale s) { return name_of(s, kScales); }
Scale parse_scale(const std::string& s) { return value_of(s, kScales, "scale"); }
const char* to_string(SchemeKind s) { return name_of(s, kSchemes); }
SchemeKind parse_scheme(const std::string& s) { return value_of(s, kSchemes, "scheme"); }
const char* to_string(NoiseScaling s) { return name_of(s, kScalings); }
NoiseScaling parse_noise_scaling(const std::string& s) { return value_of(s, kScalings, "noise scaling"); }

double parse_step(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_double(s);
  const double num = parse_double(s.substr(0, slash));
  const double den = parse_double(s.substr(slash + 1));
  if (den == 0.0) throw ConfigError("'" + s + "' divides by zero");
  return num / den;
}

std::string format_step(double v) {
  if (v > 0.0) {
    const double inv = 1.0 / v;
    const double n = std::round(inv);
    if (n >= 1.0 && n < 1e9 && 1.0 / n == v) return "1/" + std::to_string(static_cast<long long>(n));
  }
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::optional<std::string> ConfigMap::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ConfigMap::merge_defaults(const ConfigMap& other) {
  for (const auto& [k, v] : other.entries_) entries_.emplace(k, v);
}

ConfigMap ConfigMap::read_ini(std::istream& is) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ConfigMap m;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config: key '" + section + "' is outside any [section]");
    for (const auto& [key, value] : body) m.set(section + "." + key, value.data());
  }
  return m;
}

ConfigMap ConfigMap::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("manifest: ") + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) throw ConfigError("manifest: missing 'config' object");
    ConfigMap m;
    for (const auto& [section, body] : j["config"].items()) {
      if (!body.is_object()) throw ConfigError("manifest: section '" + section + "' is not an object");
      for (const auto& [key, value] : body.items()) {
        if (!value.is_string()) throw ConfigError("manifest: value of " + section + "." + key + " is not a string");
        m.set(section + "." + key, value.get<std::string>());
      }
    }
    return m;
  }
  std::istringstream is(text);
  return read_ini(is);
}

void ConfigMap::write_ini(std::ostream& os) const {
  std::string current;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << section << "]\n";
      current = section;
    }
    os << key.substr(dot + 1) << " = " << value << '\n';
  }
}

ConfigMap preset_defaults(Preset preset, Scale scale) {
  const bool full = scale == Scale::Full;
  ConfigMap m = base_map(to_string(preset), to_string(scale));
  switch (preset) {
    case Preset::Test1Temporal:
      m.set("study.axis", "temporal");
      m.set("study.np", full ? "501" : "100");
      m.set("study.reference_m", full ? "100" : "32");
      m.set("study.reference_k", full ? "1/600" : "1/512");
      m.set("study.levels", full ? "1/5,1/10,1/20,1/40" : "1/8,1/16,1/32,1/64");
      break;
    case Preset::Test1Spatial:
      m.set("study.axis", "spatial");
      m.set("study.np", full ? "501" : "100");
      m.set("study.reference_m", full ? "100" : "64");
      m.set("study.reference_k", full ? "1/200" : "1/128");
      m.set("study.levels", full ? "1/5,1/10,1/20,1/40" : "1/4,1/8,1/16,1/32");
      break;
    case Preset::Test2Cavity:
      m.set("scheme.problem", "cavity");
      m.set("study.axis", "none");
      m.set("study.np", full ? "1001" : "100");
      m.set("study.reference_m", "20");
      m.set("study.reference_k", "1/100");
      m.set("study.levels", "");
      break;
    case Preset::Test3Stabilized:
      m.set("scheme.name", "stabilized-helmholtz");
      m.set("scheme.eps", "h2");
      m.set("noise.kind", "scalar");
      m.set("scheme.potential_bc", "natural");
      m.set("study.axis", "spatial");
      m.set("study.np", full ? "800" : "100");
      m.set("study.reference_m", full ? "100" : "64");
      m.set("study.reference_k", full ? "1/256" : "1/64");
      m.set("study.levels", full ? "1/5,1/10,1/20,1/40" : "1/4,1/8,1/16,1/32");
      m.set("study.compare_standard", "true");
      break;
    case Preset::Custom:
      return ConfigMap{};
  }
  return m;
}

ConfigMap with_defaults(ConfigMap map) {
  Preset preset = Preset::Custom;
  Scale scale = Scale::Desk;
  if (const auto p = map.get("experiment.preset")) {
    try {
      preset = parse_preset(*p);
    } catch (const ConfigError&) {
      return map;  // validate() reports it
    }
  }
  if (const auto s = map.get("experiment.scale")) {
    try {
      scale = parse_scale(*s);
    } catch (const ConfigError&) {
      return map;
    }
  }
  map.merge_defaults(preset_defaults(preset, scale));
  return map;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) {
    if (d.severity == Diagnostic::Severity::Error) return true;
  }
  return false;
}

std::vector<Diagnostic> validate(const ConfigMap& map) {
  using Sev = Diagnostic::Severity;
  std::vector<Diagnostic> out;
  const auto error = [&](const std::string& field, const std::string& msg) { out.push_back({Sev::Error, field, msg}); };

  for (const auto& [key, value] : map.entries()) {
    bool known = false;
    for (const KeySpec& k : kKeys) known = known || key == k.key;
    if (!known) out.push_back({Sev::Warning, key, "unknown setting is ignored"});
  }

  const std::string axis = map.get("study.axis").value_or("");
  for (const KeySpec& k : kKeys) {
    if (!k.required || map.has(k.key)) continue;
    error(k.key, "required setting is missing");
  }
  if ((axis == "temporal" || axis == "spatial") && !map.has("study.levels")) {
    error("study.levels", "required setting is missing");
  }
  if (has_errors(out)) return out;

  // Field-by-field parsing; every failure is reported.
  ExperimentConfig c;
  const auto attempt = [&](const char* field, auto&& fn) {
    const auto v = map.get(field);
    if (!v) return;
    try {
      fn(*v);
    } catch (const ConfigError& e) {
      error(field, e.what());
    }
  };
  attempt("experiment.preset", [&](const std::string& v) { c.preset = parse_preset(v); });
  attempt("experiment.scale", [&](const std::string& v) { c.scale = parse_scale(v); });
  attempt("experiment.workers", [&](const std::string& v) {
    c.workers = parse_int(v);
    if (c.workers < 1) throw ConfigError("must be >= 1");
  });
  attempt("experiment.seed", [&](const std::string& v) { c.seed = parse_u64(v); });
  attempt("scheme.name", [&](const std::string& v) { c.scheme = parse_scheme(v); });
  attempt("scheme.problem", [&](const std::string& v) {
    if (v != "test1" && v != "cavity") throw ConfigError("unknown problem '" + v + "' (expected test1 or cavity)");
    c.problem = v;
  });
  attempt("scheme.T", [&](const std::string& v) {
    c.T = parse_step(v);
    if (!(c.T > 0.0)) throw ConfigError("must be positive");
  });
  attempt("scheme.bc", [&](const std::string& v) { c.bc = value_of(v, kBc, "boundary mode"); });
  attempt("scheme.potential_bc", [&](const std::string& v) { c.potential_bc = value_of(v, kPotentialBc, "potential bc"); });
  bool eps_ok = true;
  attempt("scheme.eps", [&](const std::string& v) {
    eps_ok = false;
    if (v == "h2") {
      c.eps.reset();
    } else if (v == "none") {
      c.eps = 0.0;
    } else {
      c.eps = parse_double(v);
      if (!(*c.eps >= 0.0)) throw ConfigError("eps must be non-negative");
    }
    eps_ok = true;
  });
  attempt("scheme.solver", [&](const std::string& v) { c.solver = value_of(v, kSolvers, "solver"); });
  attempt("noise.kind", [&](const std::string& v) { c.noise = value_of(v, kNoise, "noise kind"); });
  attempt("noise.J", [&](const std::string& v) {
    c.J = parse_int(v);
    if (c.J < 1) throw ConfigError("must be >= 1");
  });
  attempt("noise.scaling", [&](const std::string& v) { c.noise_scaling = parse_noise_scaling(v); });
  attempt("study.axis", [&](const std::string& v) {
    if (v != "temporal" && v != "spatial" && v != "none") {
      throw ConfigError("unknown axis '" + v + "' (expected temporal, spatial or none)");
    }
  });
  attempt("study.np", [&](const std::string& v) {
    c.n_realizations = parse_int(v);
    if (c.n_realizations < 1) throw ConfigError("must be >= 1");
  });
  attempt("study.reference_m", [&](const std::string& v) {
    c.reference_m = parse_int(v);
    if (c.reference_m < 2) throw ConfigError("must be >= 2");
  });
  attempt("study.reference_k", [&](const std::string& v) {
    c.reference_k = parse_step(v);
    if (!(c.reference_k > 0.0)) throw ConfigError("must be positive");
  });
  attempt("study.levels", [&](const std::string& v) {
    for (const std::string& s : split_list(v)) {
      const double x = parse_step(s);
      if (!(x > 0.0)) throw ConfigError("level '" + s + "' must be positive");
      c.levels.push_back(x);
    }
  });
  attempt("study.kinds", [&](const std::string& v) {
    for (const std::string& s : split_list(v)) c.error_kinds.push_back(parse_error_kind(s));
  });
  attempt("study.compare_standard", [&](const std::string& v) { c.compare_standard = parse_bool(v); });
  attempt("output.snapshot_stride", [&](const std::string& v) {
    c.snapshot_stride = parse_int(v);
    if (c.snapshot_stride < 0) throw ConfigError("must be >= 0");
  });
  if (has_errors(out)) return out;

  // Cross-field consistency.
  if (eps_ok && c.eps) {
    if (is_mixed(c.scheme) && *c.eps != 0.0) error("scheme.eps", "eps must be 'none' for the mixed schemes");
    if (!is_mixed(c.scheme) && *c.eps == 0.0) {
      error("scheme.eps", "stabilized schemes need eps > 0 (or 'h2')");
    }
  }
  if (!is_mixed(c.scheme) && !c.eps) out.push_back({Sev::Info, "scheme.eps", "eps = h^2 on every level"});
  if (c.problem == "cavity" && c.bc != BcMode::Dirichlet) error("scheme.bc", "the cavity problem needs dirichlet");
  if (c.compare_standard && is_mixed(c.scheme)) {
    error("study.compare_standard", "the stabilization comparison needs a stabilized scheme");
  }

  if (!is_integer_ratio(c.T, c.reference_k)) {
    std::ostringstream msg;
    msg << "T = " << c.T << " is not an integer multiple of the reference step " << format_step(c.reference_k);
    error("study.reference_k", msg.str());
  }
  if (axis == "none") {
    if (!c.levels.empty()) out.push_back({Sev::Warning, "study.levels", "levels are ignored when axis = none"});
  } else {
    if (c.levels.size() < 2) error("study.levels", "need at least two levels to fit orders");
    for (double lv : c.levels) {
      if (axis == "temporal") {
        if (!is_integer_ratio(lv, c.reference_k)) {
          std::ostringstream msg;
          msg << "k = " << format_step(lv) << " is not an integer multiple of k0 = " << format_step(c.reference_k);
          error("study.levels", msg.str());
        } else if (!is_integer_ratio(c.T, lv)) {
          error("study.levels", "T is not an integer multiple of k = " + format_step(lv));
        }
      } else {
        const double mm = std::round(1.0 / lv);
        if (mm < 2.0 || std::abs(1.0 / lv - mm) > 1e-9 * mm) {
          error("study.levels", "h = " + format_step(lv) + " is not 1/m for an integer m >= 2");
        } else if (c.reference_m % static_cast<int>(mm) != 0) {
          std::ostringstream msg;
          msg << "mesh 1/" << static_cast<int>(mm) << " is not nested in the reference mesh 1/" << c.reference_m
              << "; errors use point evaluation across non-matching triangles";
          out.push_back({Sev::Warning, "study.levels", msg.str()});
        }
        if (mm >= c.reference_m) error("study.levels", "level mesh must be coarser than the reference mesh");
      }
    }
    for (std::size_t i = 0; i + 1 < c.levels.size(); ++i) {
      if (!(c.levels[i] > c.levels[i + 1])) error("study.levels", "levels must be listed coarsest first");
    }
  }
  return out;
}

ExperimentConfig resolve(const ConfigMap& map) {
  const std::vector<Diagnostic> diags = validate(map);
  if (has_errors(diags)) {
    std::string msg = "invalid configuration:";
    for (const Diagnostic& d : diags) {
      if (d.severity == Diagnostic::Severity::Error) msg += "\n  " + d.field + ": " + d.message;
    }
    throw ConfigError(msg);
  }
  const auto get = [&](const char* k) { return *map.get(k); };
  const auto get_or = [&](const char* k, const std::string& def) { return map.get(k).value_or(def); };

  ExperimentConfig c;
  c.preset = parse_preset(get_or("experiment.preset", "custom"));
  c.scale = parse_scale(get_or("experiment.scale", "desk"));
  c.output = get_or("experiment.output", "out");
  c.workers = parse_int(get_or("experiment.workers", "1"));
  c.seed = parse_u64(get("experiment.seed"));
  c.scheme = parse_scheme(get("scheme.name"));
  c.problem = get("scheme.problem");
  c.T = parse_step(get("scheme.T"));
  c.bc = value_of(get_or("scheme.bc", "dirichlet"), kBc, "boundary mode");
  c.potential_bc = value_of(get_or("scheme.potential_bc", "periodic"), kPotentialBc, "potential bc");
  const std::string eps = get_or("scheme.eps", is_mixed(c.scheme) ? "none" : "h2");
  if (eps == "h2") {
    c.eps.reset();
  } else if (eps == "none") {
    c.eps = 0.0;
  } else {
    c.eps = parse_double(eps);
  }
  if (is_mixed(c.scheme)) c.eps.reset();
  c.solver = value_of(get_or("scheme.solver", "direct"), kSolvers, "solver");
  c.noise = value_of(get("noise.kind"), kNoise, "noise kind");
  c.J = parse_int(get_or("noise.J", "4"));
  c.noise_scaling = parse_noise_scaling(get_or("noise.scaling", "as-printed-k"));
  c.axis = get("study.axis");
  c.n_realizations = parse_int(get("study.np"));
  c.reference_m = parse_int(get("study.reference_m"));
  c.reference_k = parse_step(get("study.reference_k"));
  for (const std::string& s : split_list(get_or("study.levels", ""))) c.levels.push_back(parse_step(s));
  for (const std::string& s : split_list(get_or("study.kinds", "u_l2,u_h1,r_avg,p_avg"))) {
    c.error_kinds.push_back(parse_error_kind(s));
  }
  c.compare_standard = parse_bool(get_or("study.compare_standard", "false"));
  c.snapshot_stride = parse_int(get_or("output.snapshot_stride", "0"));
  return c;
}

SchemeConfig ExperimentConfig::scheme_config(int m, double k) const {
  SchemeConfig s;
  s.scheme = scheme;
  s.m = m;
  s.k = k;
  s.T = T;
  s.eps = is_mixed(scheme) ? std::nullopt : eps;
  s.bc_mode = bc;
  s.potential_bc = potential_bc;
  s.noise = noise;
  s.J = J;
  s.noise_scaling = noise_scaling;
  s.solver = solver;
  if (problem == "test1") {
    s.B = test1_noise_coefficient;
    s.f = [](double, const Point&) { return Vec2(1.0, 1.0); };
  } else {
    s.B = [](const Vec2&) { return Vec2(1.0, 1.0); };
    s.lid = [](const Point& x) {
      constexpr double tol = 1e-12;
      const bool top = x.y() > 1.0 - tol && x.x() > tol && x.x() < 1.0 - tol;
      return top ? Vec2(1.0, 0.0) : Vec2(0.0, 0.0);
    };
  }
  return s;
}

StudySpec ExperimentConfig::study_spec() const {
  if (axis != "temporal" && axis != "spatial") throw ConfigError("study_spec: axis must be temporal or spatial");
  StudySpec spec;
  spec.label = label();
  spec.axis = axis == "temporal" ? StudyAxis::Temporal : StudyAxis::Spatial;
  spec.reference = scheme_config(reference_m, reference_k);
  for (double lv : levels) {
    if (spec.axis == StudyAxis::Temporal) {
      spec.levels.push_back(scheme_config(reference_m, lv));
    } else {
      spec.levels.push_back(scheme_config(static_cast<int>(std::lround(1.0 / lv)), reference_k));
    }
  }
  spec.n_realizations = n_realizations;
  spec.seed_base = seed;
  spec.error_kinds = error_kinds;
  spec.workers = workers;
  return spec;
}

std::string ExperimentConfig::label() const { return to_string(preset); }

}  // namespace sstokes
