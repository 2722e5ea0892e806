#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sstokes/cli.hpp"
#include "sstokes/config.hpp"
#include "sstokes/errors.hpp"
#include "sstokes/mc.hpp"

namespace py = pybind11;
using namespace sstokes;

namespace {

using Settings = std::map<std::string, std::string>;

ConfigMap to_map(const Settings& s) {
  ConfigMap m;
  for (const auto& [k, v] : s) m.set(k, v);
  return m;
}

py::dict report_dict(const ErrorReport& r) {
  py::dict errors, orders;
  for (ErrorKind kind : r.error_kinds) {
    errors[to_string(kind)] = r.errors(kind);
    orders[to_string(kind)] = r.orders(kind);
  }
  py::dict d;
  d["label"] = r.label;
  d["axis"] = r.axis == StudyAxis::Temporal ? "temporal" : "spatial";
  d["steps"] = r.steps();
  d["n_realizations"] = r.n_realizations;
  d["seed_base"] = r.seed_base;
  d["errors"] = errors;
  d["orders"] = orders;
  d["wall_seconds"] = r.wall_seconds;
  return d;
}

py::array_t<double> points_array(const std::vector<Point>& pts) {
  py::array_t<double> a({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto v = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    v(i, 0) = pts[i].x();
    v(i, 1) = pts[i].y();
  }
  return a;
}

NoiseKind parse_kind(const std::string& s) {
  if (s == "scalar") return NoiseKind::ScalarBM;
  if (s == "qw") return NoiseKind::TruncatedQW;
  throw ConfigError("unknown noise kind '" + s + "' (expected scalar or qw)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stochastic Stokes finite element schemes and convergence studies";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def(
      "preset_defaults",
      [](const std::string& preset, const std::string& scale) {
        return preset_defaults(parse_preset(preset), parse_scale(scale)).entries();
      },
      py::arg("preset"), py::arg("scale") = "desk", "Settings of a named preset as a flat 'section.key' dict.");

  m.def(
      "validate",
      [](const Settings& s) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const Diagnostic& d : validate(with_defaults(to_map(s)))) {
          const char* sev = d.severity == Diagnostic::Severity::Error     ? "error"
                            : d.severity == Diagnostic::Severity::Warning ? "warning"
                                                                          : "info";
          out.emplace_back(sev, d.field, d.message);
        }
        return out;
      },
      py::arg("config"), "Diagnostics (severity, field, message) for a settings dict; preset defaults are applied.");

  m.def(
      "run_experiment",
      [](const Settings& s) {
        RunResult r;
        std::string log;
        {
          py::gil_scoped_release release;
          std::ostringstream os;
          r = run_experiment(with_defaults(to_map(s)), os);
          log = os.str();
        }
        py::dict d;
        d["outputs"] = r.outputs;
        d["wall_seconds"] = r.wall_seconds;
        py::list reports;
        for (const ErrorReport& e : r.reports) reports.append(report_dict(e));
        d["reports"] = reports;
        d["log"] = log;
        return d;
      },
      py::arg("config"), "Runs a study or cavity experiment and writes its outputs; returns the error reports.");

  m.def("fit_orders", &fit_orders, py::arg("errors"), py::arg("steps"));

  m.def(
      "structured_mesh",
      [](int n, bool periodic) {
        const TriMesh mesh = TriMesh::build_uniform(n, periodic ? BcMode::Periodic : BcMode::Dirichlet);
        py::array_t<int> tris({static_cast<py::ssize_t>(mesh.n_triangles()), py::ssize_t{3}});
        auto t = tris.mutable_unchecked<2>();
        for (int i = 0; i < mesh.n_triangles(); ++i) {
          for (int a = 0; a < 3; ++a) t(i, a) = mesh.triangles()[i][a];
        }
        py::dict d;
        d["vertices"] = points_array(mesh.vertices());
        d["triangles"] = tris;
        d["h"] = mesh.h();
        return d;
      },
      py::arg("m"), py::arg("periodic") = false, "Vertices and triangles of the m x m structured mesh.");

  m.def(
      "simulate",
      [](const Settings& s, int mesh_m, double k, std::uint64_t seed) {
        const ExperimentConfig c = resolve(with_defaults(to_map(s)));
        auto disc = std::make_shared<const Discretization>(c.scheme_config(mesh_m, k));
        Trajectory tr;
        {
          py::gil_scoped_release release;
          const WienerPath path = WienerPath::sample(c.noise, c.J, k, c.T, seed);
          tr = run_realization(disc, path);
        }
        const FeSpace full(disc->velocity().mesh_ptr(), disc->velocity().kind(), Constraint::None);
        const Vector u = disc->full_velocity(tr.final.u);
        const int nn = full.n_nodes();
        py::array_t<double> vel({static_cast<py::ssize_t>(nn), py::ssize_t{2}});
        auto v = vel.mutable_unchecked<2>();
        std::vector<Point> nodes(nn);
        for (int n = 0; n < nn; ++n) {
          v(n, 0) = u[n];
          v(n, 1) = u[nn + n];
          nodes[n] = full.node_coord(n);
        }
        py::dict d;
        d["velocity"] = vel;
        d["velocity_nodes"] = points_array(nodes);
        d["pressure"] = Vector(tr.final.p);
        d["pressure_average"] = Vector(tr.p_sum);
        d["pressure_nodes"] = points_array(disc->pressure().dof_coords());
        d["steps"] = tr.steps;
        return d;
      },
      py::arg("config"), py::arg("m"), py::arg("k"), py::arg("seed") = 0,
      "One realization on an m x m mesh with step k; returns final fields at the nodes.");

  py::class_<WienerPath>(m, "WienerPath")
      .def_static(
          "sample",
          [](const std::string& kind, int J, double master_k, double T, std::uint64_t seed) {
            return WienerPath::sample(parse_kind(kind), J, master_k, T, seed);
          },
          py::arg("kind"), py::arg("J"), py::arg("master_k"), py::arg("T"), py::arg("seed"))
      .def_property_readonly("master_k", &WienerPath::master_k)
      .def_property_readonly("n_master_steps", &WienerPath::n_master_steps)
      .def_property_readonly("modes", &WienerPath::modes)
      .def("master",
           [](const WienerPath& p, int n) {
             if (n < 0 || n >= p.n_master_steps()) throw py::index_error("step out of range");
             const auto s = p.master(n);
             return std::vector<double>(s.begin(), s.end());
           })
      .def("coarse_sums", [](const WienerPath& p, double k, int n) {
        const CoarsePath c = coarsen(p, k);
        if (n < 0 || n >= c.steps()) throw py::index_error("step out of range");
        return c.master_sums(n);
      });
}
