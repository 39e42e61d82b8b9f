#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pointwave/closed_form.hpp"
#include "pointwave/commands.hpp"
#include "pointwave/model_core.hpp"
#include "pointwave/pde_direct.hpp"
#include "pointwave/reduced_ode.hpp"
#include "pointwave/scenario.hpp"
#include "pointwave/volterra.hpp"

namespace py = pybind11;
using namespace pointwave;

namespace {

ModelKind parse_kind(const std::string& name) {
  if (name == "first") return ModelKind::first;
  if (name == "standard") return ModelKind::standard;
  throw ConfigError("model must be `first` or `standard`, got `" + name + "`");
}

py::dict trajectory_to_dict(const Trajectory& traj) {
  py::dict out;
  std::vector<double> ts(traj.grid.n);
  for (std::size_t k = 0; k < traj.grid.n; ++k) ts[k] = traj.grid.time(k);
  out["t"] = ts;
  out["q"] = traj.q;
  out["Q"] = traj.big_q;
  if (traj.has_qdot()) out["qdot"] = traj.qdot;
  return out;
}

Mollifier make_mollifier(const std::string& family, double width) {
  if (family == "gaussian") return Mollifier::gaussian(width);
  if (family == "bump") return Mollifier::bump(width);
  if (family == "dirac") return Mollifier::step();
  throw ConfigError("mollifier family must be gaussian|bump|dirac");
}

}  // namespace

PYBIND11_MODULE(_pointwave, m) {
  m.doc() = "point-coupled oscillator / wave-field simulation toolkit";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<OscillatorParams>(m, "OscillatorParams")
      .def(py::init([](double omega, double gamma, double gamma1, double gamma2) {
             OscillatorParams p{omega, gamma, gamma1, gamma2};
             p.validate();
             return p;
           }),
           py::arg("omega") = 1.0, py::arg("gamma") = 0.0,
           py::arg("gamma1") = 0.0, py::arg("gamma2") = 0.0)
      .def_readwrite("omega", &OscillatorParams::omega)
      .def_readwrite("gamma", &OscillatorParams::gamma)
      .def_readwrite("gamma1", &OscillatorParams::gamma1)
      .def_readwrite("gamma2", &OscillatorParams::gamma2);

  py::class_<FieldConfig>(m, "FieldConfig")
      .def(py::init([](double c, double x0, double s, double x_min, double x_max) {
             FieldConfig cfg{c, x0, s, x_min, x_max};
             cfg.validate();
             return cfg;
           }),
           py::arg("c") = 1.0, py::arg("x0") = 0.0, py::arg("s") = 0.0,
           py::arg("x_min") = -1.0, py::arg("x_max") = 1.0)
      .def_readwrite("c", &FieldConfig::c)
      .def_readwrite("x0", &FieldConfig::x0)
      .def_readwrite("s", &FieldConfig::s)
      .def_readwrite("x_min", &FieldConfig::x_min)
      .def_readwrite("x_max", &FieldConfig::x_max);

  py::class_<SteadyState>(m, "SteadyState")
      .def_readonly("a_s", &SteadyState::a_s)
      .def_readonly("a_c", &SteadyState::a_c)
      .def_readonly("amplitude", &SteadyState::amplitude)
      .def_readonly("phi_k", &SteadyState::phi_k);

  m.def(
      "propagator_components",
      [](const OscillatorParams& p, double t, double s) {
        const PropagatorEntries v = propagator_components(p, t, s);
        return py::make_tuple(v.v11, v.v12, v.v21, v.v22);
      },
      py::arg("params"), py::arg("t"), py::arg("s") = 0.0,
      "Damped-oscillator propagator entries (V11, V12, V21, V22).");

  m.def(
      "damped_response",
      [](const OscillatorParams& p, double y0, double v0,
         const std::function<double(double)>& f, double t, double s) {
        return damped_response(p, y0, v0, f, t, s);
      },
      py::arg("params"), py::arg("y_init"), py::arg("ydot_init"),
      py::arg("f"), py::arg("t"), py::arg("s") = 0.0);

  m.def(
      "homogeneous_trajectory",
      [](const OscillatorParams& p, double q0, double v0, double t_end,
         double dt) {
        return trajectory_to_dict(
            homogeneous_solution(p, q0, v0).sample(TimeGrid(0.0, t_end, dt)));
      },
      py::arg("params"), py::arg("q_init"), py::arg("qdot_init"),
      py::arg("t_end"), py::arg("dt") = 1e-3,
      "Closed-form homogeneous solution sampled on a uniform grid.");

  m.def(
      "homogeneous_field",
      [](const OscillatorParams& p, double q0, double v0, double t, double x) {
        return homogeneous_solution(p, q0, v0).u(t, x);
      },
      py::arg("params"), py::arg("q_init"), py::arg("qdot_init"), py::arg("t"),
      py::arg("x"));

  m.def(
      "steady_state",
      [](const OscillatorParams& p, double k, double A) {
        const auto [q_part, big_q_part] = steady_state(p, k, A);
        return py::make_tuple(q_part, big_q_part);
      },
      py::arg("params"), py::arg("k"), py::arg("A") = 1.0,
      "Steady response of q and of Q - A sin(kt) to an incident sine.");

  m.def("reflection_profile", &reflection_profile, py::arg("params"),
        py::arg("k"), py::arg("A"), py::arg("t"), py::arg("x"));

  m.def(
      "characteristic_roots",
      [](const std::string& kind, const OscillatorParams& p) {
        const StabilityReport report = characteristic_roots(parse_kind(kind), p);
        py::dict out;
        out["roots"] = std::vector<std::complex<double>>(report.roots.begin(),
                                                         report.roots.end());
        out["classification"] = std::string(to_string(report.classification));
        out["growth_rate"] = report.growth_rate;
        return out;
      },
      py::arg("model"), py::arg("params"));

  m.def(
      "free_field",
      [](const FieldConfig& cfg, const std::function<double(double)>& u,
         const std::function<double(double)>& udot, double t, double x) {
        InitialData init;
        if (u) init.u_init = u;
        if (udot) init.udot_init = udot;
        return free_field(cfg, init, t, x);
      },
      py::arg("cfg"), py::arg("u_init"), py::arg("udot_init"), py::arg("t"),
      py::arg("x"), "d'Alembert evolution of callable initial profiles.");

  m.def(
      "kernel_value",
      [](const std::string& family, double width, double c, double lag) {
        FieldConfig cfg;
        cfg.c = c;
        cfg.x_min = -1.0;
        cfg.x_max = 1.0;
        return build_kernel(cfg, make_mollifier(family, width)).at_lag(lag);
      },
      py::arg("family"), py::arg("width"), py::arg("c"), py::arg("lag"),
      "Memory-kernel value at the given time lag.");

  m.def(
      "run_scenario",
      [](const std::string& text) {
        Scenario sc = Scenario::parse(text);
        py::dict out;
        if (sc.solver == SolverChoice::pde) {
          CoupledRun run = run_coupled(sc.cfg, sc.params, sc.init, sc.forcing,
                                       sc.scheme, sc.grid.t_end, sc.model);
          out = trajectory_to_dict(run.trajectory);
          py::list frames;
          for (const FieldFrame& f : run.frames)
            frames.append(py::make_tuple(f.t, f.xs, f.u));
          out["frames"] = frames;
        } else if (sc.solver == SolverChoice::kernel) {
          const MemoryKernel kernel = build_kernel(sc.cfg, sc.make_mollifier());
          out = trajectory_to_dict(solve_q_nonlocal(
              sc.cfg, sc.params, kernel, make_q01(sc.cfg, sc.init, sc.forcing),
              sc.forcing, sc.init, sc.grid));
        } else {
          const ReducedSystem sys = sc.make_system();
          const Trajectory traj =
              sc.model == ModelKind::standard
                  ? integrate_standard_model(sys, sc.init, sc.grid)
                  : integrate_first_model(sys, sc.init, sc.grid);
          out = trajectory_to_dict(traj);
          if (!sc.field_times.empty()) {
            const double dx = sc.has_scheme
                                  ? sc.scheme.dx
                                  : (sc.cfg.x_max - sc.cfg.x_min) / 400.0;
            const auto nx = static_cast<std::size_t>(
                                std::round((sc.cfg.x_max - sc.cfg.x_min) / dx)) +
                            1;
            py::list frames;
            for (double t : sc.field_times) {
              std::vector<double> xs(nx), us(nx);
              for (std::size_t i = 0; i < nx; ++i) {
                xs[i] = sc.cfg.x_min + static_cast<double>(i) * dx;
                us[i] = reconstruct_field(sys, traj, t, xs[i]);
              }
              frames.append(py::make_tuple(t, xs, us));
            }
            out["frames"] = frames;
          }
        }
        return out;
      },
      py::arg("scenario_text"),
      "Parse a scenario (same flat key-value format as the CLI) and run it.");
}
