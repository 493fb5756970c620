#include <algorithm>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "imbibe/absorption.hpp"
#include "imbibe/calibration.hpp"
#include "imbibe/commands.hpp"
#include "imbibe/domain.hpp"
#include "imbibe/errors.hpp"
#include "imbibe/manifest.hpp"
#include "imbibe/retention.hpp"
#include "imbibe/solver.hpp"

namespace py = pybind11;
using namespace imbibe;

namespace {

// std::variant has its own pybind11 caster; wrap it so Python sees one class.
struct Model {
  AbsorptionModel m;
};

ImbibitionDataset dataset(const std::vector<double>& t, const std::vector<double>& q) {
  if (t.size() != q.size()) throw ValidationError("times and Q must have the same length");
  ImbibitionDataset d;
  for (std::size_t i = 0; i < t.size(); ++i) d.samples.push_back({t[i], q[i]});
  return d;
}

SolverConfig solver_config(double dz, std::optional<double> dt, double cfl_safety, double theta_ext,
                           std::optional<double> K_w) {
  SolverConfig c;
  c.dz = dz;
  c.dt = dt;
  c.cfl_safety = cfl_safety;
  if (K_w) c.top_bc = RobinTop{*K_w, theta_ext};
  else c.top_bc = DirichletTop{theta_ext};
  return c;
}

AnnealerConfig annealer(std::uint64_t seed, std::size_t max_evaluations) {
  AnnealerConfig a;
  a.rng_seed = seed;
  a.max_evaluations = max_evaluations;
  // keep the polish share of small budgets at a quarter
  a.polish_evaluations = std::min(a.polish_evaluations, max_evaluations / 4);
  return a;
}

py::dict trace_dict(const std::vector<TracePoint>& trace) {
  std::vector<double> err, best;
  for (const auto& p : trace) {
    err.push_back(p.error);
    best.push_back(p.best);
  }
  py::dict d;
  d["error"] = err;
  d["best"] = best;
  return d;
}

}  // namespace

PYBIND11_MODULE(_imbibe, m) {
  m.doc() = "Capillary imbibition toolkit";
  m.attr("__version__") = IMBIBE_VERSION;

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<MaterialSpec>(m, "MaterialSpec")
      .def(py::init([](std::string name, double n0, std::optional<double> tau) {
             MaterialSpec s{std::move(name), n0, tau};
             s.validate();
             return s;
           }),
           py::arg("name"), py::arg("n0"), py::arg("tau") = py::none())
      .def_readwrite("name", &MaterialSpec::name)
      .def_readwrite("n0", &MaterialSpec::n0)
      .def_readwrite("tau", &MaterialSpec::tau);

  py::class_<ExperimentSetup>(m, "ExperimentSetup")
      .def(py::init([](double h1, double Tf, double theta_ext, double h2, double rho, double mu) {
             ExperimentSetup s;
             s.h1 = h1;
             s.Tf = Tf;
             s.theta_ext = theta_ext;
             s.h2 = h2;
             s.rho = rho;
             s.mu = mu;
             s.validate();
             return s;
           }),
           py::arg("h1"), py::arg("Tf"), py::arg("theta_ext") = 0.0, py::arg("h2") = 0.0, py::arg("rho") = 1.0,
           py::arg("mu") = 8.9e-3)
      .def_readwrite("h1", &ExperimentSetup::h1)
      .def_readwrite("h2", &ExperimentSetup::h2)
      .def_readwrite("rho", &ExperimentSetup::rho)
      .def_readwrite("mu", &ExperimentSetup::mu)
      .def_readwrite("Tf", &ExperimentSetup::Tf)
      .def_readwrite("theta_ext", &ExperimentSetup::theta_ext);

  py::class_<CubicParams>(m, "CubicParams")
      .def(py::init([](double s_R, double s_S, double D) { return CubicParams{s_R, s_S, D}; }), py::arg("s_R"),
           py::arg("s_S"), py::arg("D"))
      .def_readwrite("s_R", &CubicParams::s_R)
      .def_readwrite("s_S", &CubicParams::s_S)
      .def_readwrite("D", &CubicParams::D)
      .def("__repr__", [](const CubicParams& p) {
        return "CubicParams(s_R=" + std::to_string(p.s_R) + ", s_S=" + std::to_string(p.s_S) +
               ", D=" + std::to_string(p.D) + ")";
      });

  py::class_<KPParams>(m, "KPParams")
      .def(py::init([](double s_R, double s_S, double alpha, double c, double K_s, double gamma) {
             return KPParams{s_R, s_S, alpha, c, K_s, gamma};
           }),
           py::arg("s_R"), py::arg("s_S"), py::arg("alpha"), py::arg("c"), py::arg("K_s"), py::arg("gamma"))
      .def_readwrite("s_R", &KPParams::s_R)
      .def_readwrite("s_S", &KPParams::s_S)
      .def_readwrite("alpha", &KPParams::alpha)
      .def_readwrite("c", &KPParams::c)
      .def_readwrite("K_s", &KPParams::K_s)
      .def_readwrite("gamma", &KPParams::gamma)
      .def_property_readonly("product", &KPParams::product);

  py::class_<Model>(m, "AbsorptionModel")
      .def_static("cubic", [](const CubicParams& p) { return Model{CubicModel(p)}; })
      .def_static("kp", [](const KPParams& p, double mu) { return Model{KPModel(p, mu)}; }, py::arg("params"),
                  py::arg("mu") = 8.9e-3)
      .def("B", [](const Model& a, double s) { return std::visit([s](const auto& x) { return x.B(s); }, a.m); })
      .def("Bprime",
           [](const Model& a, double s) { return std::visit([s](const auto& x) { return x.Bprime(s); }, a.m); })
      .def_property_readonly("max_Bprime", [](const Model& a) { return max_Bprime(a.m); })
      .def_property_readonly("residual_saturation", [](const Model& a) { return residual_saturation(a.m); });

  py::class_<LaplaceConstants>(m, "LaplaceConstants")
      .def(py::init<>())
      .def_readwrite("T_w", &LaplaceConstants::T_w)
      .def_readwrite("T_Hg", &LaplaceConstants::T_Hg)
      .def_readwrite("theta_w", &LaplaceConstants::theta_w)
      .def_readwrite("theta_Hg", &LaplaceConstants::theta_Hg)
      .def_property_readonly("factor", &LaplaceConstants::factor);

  m.def("saturated_vapor_density", &saturated_vapor_density, py::arg("temperature_c"));
  m.def("ambient_moisture", &ambient_moisture, py::arg("temperature_c"), py::arg("UR"), py::arg("material"),
        py::arg("rho") = 1.0);

  m.def("cubic_B", &cubic_B, py::arg("s"), py::arg("params"));
  m.def("cubic_Bprime", &cubic_Bprime, py::arg("s"), py::arg("params"));
  m.def("kp_permeability", &kp_permeability, py::arg("s"), py::arg("params"));
  m.def("kp_capillary_pressure", &kp_capillary_pressure, py::arg("s"), py::arg("params"));
  m.def("kp_B", &kp_B, py::arg("s"), py::arg("params"), py::arg("mu") = 8.9e-3);
  m.def("kp_Bprime", &kp_Bprime, py::arg("s"), py::arg("params"), py::arg("mu") = 8.9e-3);
  m.def("kp_diffusion_coefficient", &kp_diffusion_coefficient, py::arg("params"), py::arg("mu") = 8.9e-3);

  m.def(
      "stable_timestep",
      [](const Model& model, const MaterialSpec& material, double dz, double cfl_safety) {
        SolverConfig c;
        c.dz = dz;
        c.cfl_safety = cfl_safety;
        return stable_timestep(model.m, material, c);
      },
      py::arg("model"), py::arg("material"), py::arg("dz") = 2.5e-2, py::arg("cfl_safety") = 0.9);

  m.def(
      "simulate",
      [](const Model& model, const MaterialSpec& material, const ExperimentSetup& setup, double dz,
         std::optional<double> dt, double cfl_safety, std::vector<double> snapshots, std::vector<double> sample_times,
         std::optional<double> K_w, std::optional<double> breakthrough_threshold) {
        SolverConfig c = solver_config(dz, dt, cfl_safety, setup.theta_ext, K_w);
        if (snapshots.empty() && sample_times.empty()) snapshots = {0.0, setup.Tf};
        c.snapshot_times = std::move(snapshots);
        c.sample_times = std::move(sample_times);
        c.breakthrough_threshold = breakthrough_threshold;
        SimulationResult r;
        {
          py::gil_scoped_release release;
          r = simulate(model.m, material, setup, c);
        }
        std::vector<double> t, q;
        for (const auto& s : r.q_curve) {
          t.push_back(s.t);
          q.push_back(s.Q);
        }
        py::list profiles;
        for (const auto& p : r.profiles) profiles.append(py::make_tuple(p.t, p.theta));
        py::dict out;
        out["t"] = t;
        out["Q"] = q;
        out["profiles"] = profiles;
        out["breakthrough_time"] = r.breakthrough_time;
        out["dt"] = r.dt;
        out["dz"] = r.dz;
        out["steps"] = r.steps;
        return out;
      },
      py::arg("model"), py::arg("material"), py::arg("setup"), py::arg("dz") = 2.5e-2, py::arg("dt") = py::none(),
      py::arg("cfl_safety") = 0.9, py::arg("snapshots") = std::vector<double>{},
      py::arg("sample_times") = std::vector<double>{}, py::arg("K_w") = py::none(),
      py::arg("breakthrough_threshold") = py::none(),
      "Forward imbibition run. Returns a dict with t, Q, profiles [(t, theta)], breakthrough_time, dt, dz, steps.\n"
      "Without snapshots or sample_times, the profile is kept at 0 and Tf.");

  m.def(
      "absorbed_mass",
      [](const std::vector<double>& theta, double dz, double rho) {
        return absorbed_mass(SaturationProfile{0.0, theta}, dz, rho);
      },
      py::arg("theta"), py::arg("dz"), py::arg("rho") = 1.0);

  m.def(
      "breakthrough_time",
      [](const std::vector<double>& times, const std::vector<std::vector<double>>& thetas, double n0,
         double threshold) {
        if (times.size() != thetas.size()) throw ValidationError("times and profiles must have the same length");
        SimulationResult r;
        r.n0 = n0;
        for (std::size_t i = 0; i < times.size(); ++i) r.profiles.push_back({times[i], thetas[i]});
        return breakthrough_time(r, threshold);
      },
      py::arg("times"), py::arg("profiles"), py::arg("n0"), py::arg("threshold"));

  m.def("error_functional", [](const std::vector<double>& q_num, const std::vector<double>& q_data) {
    return error_functional(q_num, q_data);
  });

  m.def(
      "calibrate_cubic",
      [](const std::vector<double>& t, const std::vector<double>& q, const MaterialSpec& material,
         const ExperimentSetup& setup, double dz, std::uint64_t seed, std::size_t max_evaluations) {
        const auto data = dataset(t, q);
        CalibrationResult r;
        {
          py::gil_scoped_release release;
          r = calibrate_cubic(data, material, setup, solver_config(dz, std::nullopt, 0.9, setup.theta_ext, {}),
                              CubicBounds{}, annealer(seed, max_evaluations));
        }
        py::dict out;
        out["params"] = std::get<CubicParams>(r.params);
        out["error"] = r.error;
        out["evaluations"] = r.evaluations;
        out["trace"] = trace_dict(r.trace);
        return out;
      },
      py::arg("times"), py::arg("Q"), py::arg("material"), py::arg("setup"), py::arg("dz") = 2.5e-2,
      py::arg("seed") = 1, py::arg("max_evaluations") = 5000);

  m.def(
      "calibrate_kp",
      [](const std::vector<double>& t, const std::vector<double>& q, const MaterialSpec& material,
         const ExperimentSetup& setup, const CubicParams& warm_start, double K_s, double dz, std::uint64_t seed,
         std::size_t max_evaluations) {
        const auto data = dataset(t, q);
        CalibrationResult r;
        {
          py::gil_scoped_release release;
          r = calibrate_kp(data, material, setup, solver_config(dz, std::nullopt, 0.9, setup.theta_ext, {}),
                           KPBounds{}, annealer(seed, max_evaluations), warm_start, ProductSplit{K_s, std::nullopt});
        }
        py::dict out;
        out["params"] = std::get<KPParams>(r.params);
        out["error"] = r.error;
        out["evaluations"] = r.evaluations;
        out["trace"] = trace_dict(r.trace);
        return out;
      },
      py::arg("times"), py::arg("Q"), py::arg("material"), py::arg("setup"), py::arg("warm_start"), py::arg("K_s"),
      py::arg("dz") = 2.5e-2, py::arg("seed") = 1, py::arg("max_evaluations") = 5000);

  m.def("mip_to_suction", &mip_to_suction, py::arg("p_hg"), py::arg("constants") = LaplaceConstants{});
  m.def("mip_saturation", &mip_saturation, py::arg("v"), py::arg("v_max"));

  m.def(
      "retention_compare",
      [](const std::vector<double>& s, const std::vector<double>& P, const KPParams& params) {
        if (s.size() != P.size()) throw ValidationError("s and P must have the same length");
        RetentionCurve c;
        for (std::size_t i = 0; i < s.size(); ++i) c.points.push_back({s[i], P[i]});
        const auto r = retention_compare(c, params);
        py::dict out;
        out["compared"] = r.compared;
        out["excluded"] = r.excluded;
        out["mean_log_ratio"] = r.mean_log_ratio;
        out["max_abs_log_ratio"] = r.max_abs_log_ratio;
        out["within_decade"] = r.within_decade;
        return out;
      },
      py::arg("s"), py::arg("P"), py::arg("params"));

  m.def(
      "run",
      [](const std::string& command, const std::filesystem::path& manifest, std::optional<std::filesystem::path> out,
         std::optional<std::uint64_t> seed) {
        Overrides o;
        o.seed = seed;
        RunManifest mf = load_manifest(manifest);
        apply_overrides(mf, o);
        const auto dir = out ? *out : (mf.out ? resolve(mf, *mf.out) : std::filesystem::path("out"));
        CommandOutcome r;
        {
          py::gil_scoped_release release;
          r = run_command(mf, parse_command(command), dir);
        }
        py::dict d;
        d["out_dir"] = r.out_dir;
        std::vector<std::filesystem::path> files = r.files;
        d["files"] = files;
        d["summary"] = py::module_::import("json").attr("loads")(r.summary);
        return d;
      },
      py::arg("command"), py::arg("manifest"), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      "Run one CLI command (simulate, calibrate, retention, sensitivity) from a manifest file.");
}
