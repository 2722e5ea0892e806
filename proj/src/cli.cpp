#include "sstokes/cli.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sstokes/errors.hpp"

namespace sstokes {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << std::setprecision(17);
  return os;
}

void write_records(std::ostream& os, int n, double t, const Vector& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) os << n << ' ' << t << ' ' << i << ' ' << values[i] << '\n';
}

void log_report(const ErrorReport& r, std::ostream& log) {
  log << r.label << ": " << r.n_realizations << " realizations, " << std::fixed << std::setprecision(1)
      << r.wall_seconds << " s\n";
  log << std::defaultfloat;
  for (ErrorKind kind : r.error_kinds) {
    log << "  " << std::left << std::setw(8) << to_string(kind) << std::right;
    const auto e = r.errors(kind);
    const auto o = r.orders(kind);
    for (std::size_t i = 0; i < e.size(); ++i) {
      log << "  " << std::scientific << std::setprecision(4) << e[i];
      if (i > 0) log << " (" << std::fixed << std::setprecision(3) << o[i - 1] << ")";
    }
    log << std::defaultfloat << '\n';
  }
}

std::string write_report(const ErrorReport& r, const fs::path& dir) {
  const std::string name = r.label + ".csv";
  std::ofstream os = open_output(dir / name);
  write_csv(r, os);
  return name;
}

RunResult run_cavity(const ExperimentConfig& c, const fs::path& dir, std::ostream& log) {
  const auto disc = std::make_shared<const Discretization>(c.scheme_config(c.reference_m, c.reference_k));
  const int np = c.n_realizations;
  constexpr int kTraced = 3;
  std::vector<Vector> final_u(np), final_p(np);
  std::vector<std::string> traces_u(std::min(np, kTraced)), traces_p(std::min(np, kTraced));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const int l = next.fetch_add(1);
      if (l >= np) return;
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      try {
        const WienerPath path = WienerPath::sample(c.noise, c.J, c.reference_k, c.T, realization_seed(c.seed, l));
        RunOptions opts;
        std::ostringstream su, sp;
        su << std::setprecision(17);
        sp << std::setprecision(17);
        const int steps = static_cast<int>(std::lround(c.T / c.reference_k));
        if (l < kTraced) {
          opts.observer = [&](const SchemeState& s, double t) {
            const bool keep = s.n == steps || (c.snapshot_stride > 0 && s.n % c.snapshot_stride == 0);
            if (!keep) return;
            write_records(su, s.n, t, disc->full_velocity(s.u));
            write_records(sp, s.n, t, s.p);
          };
        }
        const Trajectory tr = run_realization(disc, path, opts);
        final_u[l] = disc->full_velocity(tr.final.u);
        final_p[l] = tr.final.p;
        if (l < kTraced) {
          traces_u[l] = su.str();
          traces_p[l] = sp.str();
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int n_workers = std::min(c.workers, np);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  Vector mean_u = Vector::Zero(final_u[0].size());
  Vector mean_p = Vector::Zero(final_p[0].size());
  for (int l = 0; l < np; ++l) {
    mean_u += final_u[l];
    mean_p += final_p[l];
  }
  mean_u /= np;
  mean_p /= np;

  RunResult result;
  const int steps = static_cast<int>(std::lround(c.T / c.reference_k));
  const double t_final = steps * c.reference_k;
  {
    std::ofstream os = open_output(dir / "mesh.txt");
    disc->mesh().write_text(os);
    result.outputs.push_back("mesh.txt");
  }
  {
    // Coordinates of the dump indices: velocity index c * n_nodes + node.
    std::ofstream os = open_output(dir / "velocity_dofs.txt");
    const FeSpace full(disc->velocity().mesh_ptr(), disc->velocity().kind(), Constraint::None);
    for (int comp = 0; comp < 2; ++comp) {
      for (int n = 0; n < full.n_nodes(); ++n) {
        const Point x = full.node_coord(n);
        os << comp * full.n_nodes() + n << ' ' << comp << ' ' << x.x() << ' ' << x.y() << '\n';
      }
    }
    result.outputs.push_back("velocity_dofs.txt");
  }
  {
    std::ofstream os = open_output(dir / "pressure_dofs.txt");
    const std::vector<Point> pts = disc->pressure().dof_coords();
    for (std::size_t i = 0; i < pts.size(); ++i) os << i << ' ' << pts[i].x() << ' ' << pts[i].y() << '\n';
    result.outputs.push_back("pressure_dofs.txt");
  }
  {
    std::ofstream os = open_output(dir / "mean_velocity.txt");
    write_records(os, steps, t_final, mean_u);
    result.outputs.push_back("mean_velocity.txt");
  }
  {
    std::ofstream os = open_output(dir / "mean_pressure.txt");
    write_records(os, steps, t_final, mean_p);
    result.outputs.push_back("mean_pressure.txt");
  }
  for (std::size_t l = 0; l < traces_u.size(); ++l) {
    const std::string nu = "realization" + std::to_string(l) + "_velocity.txt";
    const std::string npr = "realization" + std::to_string(l) + "_pressure.txt";
    open_output(dir / nu) << traces_u[l];
    open_output(dir / npr) << traces_p[l];
    result.outputs.push_back(nu);
    result.outputs.push_back(npr);
  }
  log << c.label() << ": " << np << " realizations on m = " << c.reference_m << ", k = "
      << format_step(c.reference_k) << "; max |E u| = " << mean_u.cwiseAbs().maxCoeff() << '\n';
  return result;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult run_experiment(const ConfigMap& map, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig c = resolve(map);
  const fs::path dir(c.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + c.output + "': " + ec.message());

  RunResult result;
  if (c.axis == "none") {
    result = run_cavity(c, dir, log);
  } else {
    const StudySpec spec = c.study_spec();
    if (c.compare_standard) {
      const ComparisonReport cmp = compare_stabilization(spec);
      result.reports = {cmp.helmholtz, cmp.standard};
    } else {
      result.reports = {run_study(spec)};
    }
    for (const ErrorReport& r : result.reports) {
      log_report(r, log);
      result.outputs.push_back(write_report(r, dir));
    }
  }
  result.outputs.push_back("manifest.json");
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  open_output(dir / "manifest.json") << manifest_json(map, result) << '\n';
  return result;
}

std::string manifest_json(const ConfigMap& map, const RunResult& result, bool stable_only) {
  nlohmann::ordered_json j;
  j["tool"] = "sstokes";
  j["version"] = kVersion;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : map.entries()) {
    const auto dot = key.find('.');
    config[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  j["config"] = config;
  const auto seed = map.get("experiment.seed");
  const auto np = map.get("study.np");
  j["seeds"] = {{"base", seed.value_or("")},
                {"count", np.value_or("")},
                {"rule", "realization l uses seed base + l on every level"}};
  j["outputs"] = result.outputs;
  if (!stable_only) {
    j["created"] = utc_now();
    j["wall_seconds"] = result.wall_seconds;
  }
  return j.dump(2);
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Monte Carlo convergence studies for finite element schemes of the stochastic Stokes equations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Options {
    std::string preset, config, scale, out, scheme, noise_scaling;
    std::optional<int> np, workers;
    std::optional<std::uint64_t> seed;
  };
  Options opt;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", opt.preset, "test1-temporal | test1-spatial | test2-cavity | test3-stabilized | custom");
    sub->add_option("--config", opt.config, "INI config file or a manifest.json from an earlier run");
    sub->add_option("--np", opt.np, "number of realizations");
    sub->add_option("--scale", opt.scale, "desk | full");
    sub->add_option("--seed", opt.seed, "base seed (realization l uses seed + l)");
    sub->add_option("--workers", opt.workers, "worker threads");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--scheme", opt.scheme,
                    "mixed-helmholtz | mixed-standard | stabilized-helmholtz | stabilized-standard");
    sub->add_option("--noise-scaling", opt.noise_scaling, "as-printed-k | sqrt-k");
  };
  CLI::App* run = app.add_subcommand("run", "run an experiment and write CSVs and a manifest");
  CLI::App* val = app.add_subcommand("validate", "check a configuration without running it");
  CLI::App* show = app.add_subcommand("show-config", "print the effective configuration as INI");
  for (CLI::App* sub : {run, val, show}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    ConfigMap map;
    if (!opt.config.empty()) map = ConfigMap::read_file(opt.config);
    if (!opt.preset.empty()) map.set("experiment.preset", opt.preset);
    if (!opt.scale.empty()) map.set("experiment.scale", opt.scale);
    map = with_defaults(std::move(map));
    if (opt.np) map.set("study.np", std::to_string(*opt.np));
    if (opt.seed) map.set("experiment.seed", std::to_string(*opt.seed));
    if (opt.workers) map.set("experiment.workers", std::to_string(*opt.workers));
    if (!opt.out.empty()) map.set("experiment.output", opt.out);
    if (!opt.scheme.empty()) {
      map.set("scheme.name", opt.scheme);
      if (map.get("scheme.eps") == "none" && opt.scheme.rfind("stabilized", 0) == 0) map.set("scheme.eps", "h2");
      if (map.get("scheme.eps") == "h2" && opt.scheme.rfind("mixed", 0) == 0) map.set("scheme.eps", "none");
    }
    if (!opt.noise_scaling.empty()) map.set("noise.scaling", opt.noise_scaling);

    const std::vector<Diagnostic> diags = validate(map);
    for (const Diagnostic& d : diags) {
      const char* sev = d.severity == Diagnostic::Severity::Error     ? "error"
                        : d.severity == Diagnostic::Severity::Warning ? "warning"
                                                                      : "info";
      std::cerr << sev << ": " << d.field << ": " << d.message << '\n';
    }
    if (has_errors(diags)) return kExitConfig;

    if (*show) {
      map.write_ini(std::cout);
      return kExitOk;
    }
    if (*val) {
      std::cout << "configuration is valid\n";
      return kExitOk;
    }
    const RunResult r = run_experiment(map, std::cout);
    std::cout << "wrote " << r.outputs.size() << " files to " << *map.get("experiment.output") << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace sstokes
