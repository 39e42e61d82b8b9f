#include "pointwave/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "pointwave/closed_form.hpp"
#include "pointwave/model_core.hpp"

namespace pointwave {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::string stamp(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool include_qdot) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  const bool qdot = include_qdot && traj.has_qdot();
  out << (qdot ? "t,q,Q,qdot\n" : "t,q,Q\n");
  for (std::size_t k = 0; k < traj.grid.n; ++k) {
    out << format_double(traj.grid.time(k)) << ',' << format_double(traj.q[k])
        << ',' << format_double(traj.big_q[k]);
    if (qdot) out << ',' << format_double(traj.qdot[k]);
    out << '\n';
  }
}

void write_frame_csv(const std::string& path, const FieldFrame& frame) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "x,u\n";
  for (std::size_t i = 0; i < frame.xs.size(); ++i)
    out << format_double(frame.xs[i]) << ',' << format_double(frame.u[i]) << '\n';
}

int cmd_simulate(const Scenario& sc, const std::string& out_dir) {
  fs::create_directories(out_dir);
  Trajectory traj;
  std::vector<FieldFrame> frames;

  if (sc.solver == SolverChoice::pde) {
    GridScheme scheme = sc.scheme;
    scheme.snapshot_times = sc.field_times;
    CoupledRun run = run_coupled(sc.cfg, sc.params, sc.init, sc.forcing, scheme,
                                 sc.grid.t_end, sc.model);
    traj = std::move(run.trajectory);
    frames = std::move(run.frames);
    for (double t : sc.field_times) {
      // The run stored a frame at the step nearest each requested time.
      const FieldFrame* best = &frames.front();
      for (const FieldFrame& f : frames)
        if (std::abs(f.t - t) < std::abs(best->t - t)) best = &f;
      write_frame_csv((fs::path(out_dir) / ("field_t" + stamp(t) + ".csv")).string(),
                      *best);
    }
  } else if (sc.solver == SolverChoice::kernel) {
    if (!sc.field_times.empty())
      throw ConfigError("field output is not available for kernel runs");
    const MemoryKernel kernel = build_kernel(sc.cfg, sc.make_mollifier());
    const TimeFunc q01 = make_q01(sc.cfg, sc.init, sc.forcing);
    traj = solve_q_nonlocal(sc.cfg, sc.params, kernel, q01, sc.forcing, sc.init,
                            sc.grid);
  } else {
    const ReducedSystem sys = sc.make_system();
    traj = sc.model == ModelKind::standard
               ? integrate_standard_model(sys, sc.init, sc.grid)
               : integrate_first_model(sys, sc.init, sc.grid);
    if (!sc.field_times.empty()) {
      const double dx = sc.has_scheme ? sc.scheme.dx
                                      : (sc.cfg.x_max - sc.cfg.x_min) / 400.0;
      const auto nx =
          static_cast<std::size_t>(std::round((sc.cfg.x_max - sc.cfg.x_min) / dx)) + 1;
      for (double t : sc.field_times) {
        FieldFrame frame;
        frame.t = t;
        frame.xs.resize(nx);
        frame.u.resize(nx);
        for (std::size_t i = 0; i < nx; ++i) {
          frame.xs[i] = sc.cfg.x_min + static_cast<double>(i) * dx;
          frame.u[i] = reconstruct_field(sys, traj, t, frame.xs[i]);
        }
        write_frame_csv(
            (fs::path(out_dir) / ("field_t" + stamp(t) + ".csv")).string(), frame);
      }
    }
  }

  write_trajectory_csv((fs::path(out_dir) / "trajectory.csv").string(), traj,
                       sc.output_qdot);
  return 0;
}

namespace {

// Least-squares fit q(t) ~ a sin(kt) + b cos(kt) + offset over [t0, t1].
std::optional<std::pair<double, double>> fit_harmonic(const Trajectory& traj,
                                                      double k, double t0,
                                                      double t1) {
  double m[3][3] = {};
  double rhs[3] = {};
  for (std::size_t i = 0; i < traj.grid.n; ++i) {
    const double t = traj.grid.time(i);
    if (t < t0 || t > t1) continue;
    const double row[3] = {std::sin(k * t), std::cos(k * t), 1.0};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += row[a] * row[b];
      rhs[a] += row[a] * traj.q[i];
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal system.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[perm[r]][col]) > std::abs(m[perm[pivot]][col])) pivot = r;
    std::swap(perm[col], perm[pivot]);
    const double diag = m[perm[col]][col];
    if (std::abs(diag) < 1e-12) return std::nullopt;
    for (int r = col + 1; r < 3; ++r) {
      const double factor = m[perm[r]][col] / diag;
      for (int cc = col; cc < 3; ++cc) m[perm[r]][cc] -= factor * m[perm[col]][cc];
      rhs[perm[r]] -= factor * rhs[perm[col]];
    }
  }
  double sol[3];
  for (int row = 2; row >= 0; --row) {
    double acc = rhs[perm[row]];
    for (int cc = row + 1; cc < 3; ++cc) acc -= m[perm[row]][cc] * sol[cc];
    sol[row] = acc / m[perm[row]][row];
  }
  return std::make_pair(sol[0], sol[1]);
}

}  // namespace

ScanResult scan_resonance(const ScanOptions& opts) {
  opts.params.validate();
  if (!(opts.params.gamma * opts.settle_time >= 10.0))
    throw ConfigError("scan requires gamma * settle_time >= 10");
  if (!(opts.k_step > 0.0) || !(opts.k_max >= opts.k_min))
    throw ConfigError("bad wavenumber range");

  const auto count = static_cast<std::size_t>(
                         std::floor((opts.k_max - opts.k_min) / opts.k_step + 1e-9)) +
                     1;
  const double t_end = 1.25 * opts.settle_time;
  const TimeGrid grid(0.0, t_end, opts.dt);

  ScanResult result;
  result.rows.resize(count);

  auto run_one = [&](std::size_t idx) {
    const double k = opts.k_min + static_cast<double>(idx) * opts.k_step;
    ScanRow row;
    row.k = k;
    FieldConfig cfg;  // c = 1, x0 = 0, s = 0
    ReducedSystem sys =
        ReducedSystem::first_model(opts.params, cfg, InitialData::rest(), Forcing{});
    const double A = opts.amplitude;
    sys.with_q01([A, k](double t) { return A * std::sin(k * t); },
                 [A, k](double t) { return A * k * std::cos(k * t); });
    const Trajectory traj = integrate_first_model(sys, InitialData::rest(), grid);
    const auto fit = fit_harmonic(traj, k, 0.8 * t_end, t_end);
    if (fit) {
      row.amplitude = std::hypot(fit->first, fit->second);
      row.phase = std::atan2(fit->second, fit->first);
      row.fit_ok = true;
    }
    result.rows[idx] = row;
  };

  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += threads) run_one(i);
      });
    for (auto& t : pool) t.join();
  }

  double best = -1.0;
  for (const ScanRow& row : result.rows) {
    if (row.fit_ok && row.amplitude > best) {
      best = row.amplitude;
      result.k_star = row.k;
      result.peak_amplitude = row.amplitude;
    }
  }
  if (best < 0.0) throw SolverError("scan: amplitude fit failed at every k");
  return result;
}

int cmd_scan_resonance(const ScanOptions& opts, const std::string& out_dir) {
  const ScanResult result = scan_resonance(opts);
  std::ofstream out = open_out(out_dir, "scan.csv");
  out << "k,amplitude,phase,fit_ok\n";
  for (const ScanRow& row : result.rows)
    out << format_double(row.k) << ',' << format_double(row.amplitude) << ','
        << format_double(row.phase) << ',' << (row.fit_ok ? 1 : 0) << '\n';
  std::cout << "scanned " << result.rows.size()
            << " wavenumbers; peak amplitude " << result.peak_amplitude
            << " at k = " << result.k_star << "\n";
  return 0;
}

int cmd_roots(ModelKind kind, const OscillatorParams& params,
              const std::string& out_dir) {
  const StabilityReport report = characteristic_roots(kind, params);
  std::cout << (kind == ModelKind::first ? "first" : "standard")
            << " model characteristic roots:\n";
  for (const auto& root : report.roots)
    std::cout << "  " << root.real() << (root.imag() < 0 ? " - " : " + ")
              << std::abs(root.imag()) << "i\n";
  std::cout << "classification: " << to_string(report.classification)
            << ", growth rate " << report.growth_rate << "\n";

  std::ofstream out = open_out(out_dir, "roots.csv");
  out << "re,im,classification,growth_rate\n";
  for (const auto& root : report.roots)
    out << format_double(root.real()) << ',' << format_double(root.imag()) << ','
        << to_string(report.classification) << ','
        << format_double(report.growth_rate) << '\n';
  return 0;
}

namespace {

struct SolverOutput {
  std::string name;
  Trajectory traj;
  std::string error;  // non-empty when the solver failed
};

// Resample a trajectory onto the reference grid by linear interpolation.
void gaps_on_grid(const Trajectory& a, const Trajectory& b, const TimeGrid& grid,
                  double& dq, double& dQ) {
  dq = 0.0;
  dQ = 0.0;
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double t = grid.time(k);
    dq = std::max(dq, std::abs(a.q_at(t) - b.q_at(t)));
    dQ = std::max(dQ, std::abs(a.big_q_at(t) - b.big_q_at(t)));
  }
}

}  // namespace

int cmd_compare(const Scenario& sc, const std::string& out_dir) {
  if (sc.kernel_model)
    throw ConfigError("compare expects model = first or standard");

  std::vector<std::string> wanted = sc.compare_solvers;
  if (wanted.empty()) {
    if (sc.closed_form_applies()) wanted.push_back("closed");
    wanted.push_back("reduced");
    if (sc.has_scheme) wanted.push_back("pde");
    if (sc.model == ModelKind::first) wanted.push_back("kernel");
  }

  std::vector<SolverOutput> runs;
  for (const std::string& name : wanted) {
    SolverOutput out;
    out.name = name;
    try {
      if (name == "closed") {
        if (!sc.closed_form_applies())
          throw ConfigError("closed-form solver does not apply to this scenario");
        out.traj =
            homogeneous_solution(sc.params, sc.init.q_init, sc.init.qdot_init)
                .sample(sc.grid);
      } else if (name == "reduced") {
        const ReducedSystem sys = sc.make_system();
        out.traj = sc.model == ModelKind::standard
                       ? integrate_standard_model(sys, sc.init, sc.grid)
                       : integrate_first_model(sys, sc.init, sc.grid);
      } else if (name == "pde") {
        if (!sc.has_scheme) throw ConfigError("pde solver needs pde.dx");
        out.traj = run_coupled(sc.cfg, sc.params, sc.init, sc.forcing, sc.scheme,
                               sc.grid.t_end, sc.model)
                       .trajectory;
      } else if (name == "kernel") {
        const MemoryKernel kernel = build_kernel(sc.cfg, sc.make_mollifier());
        const TimeFunc q01 = make_q01(sc.cfg, sc.init, sc.forcing);
        out.traj = solve_q_nonlocal(sc.cfg, sc.params, kernel, q01, sc.forcing,
                                    sc.init, sc.grid);
      } else {
        throw ConfigError("unknown compare solver `" + name + "`");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& err) {
      out.error = err.what();
    }
    runs.push_back(std::move(out));
  }

  std::ofstream out = open_out(out_dir, "compare.csv");
  out << "pair,max_dq,max_dQ,tol,pass\n";
  bool all_pass = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      const std::string pair = runs[i].name + "/" + runs[j].name;
      const bool has_pde = runs[i].name == "pde" || runs[j].name == "pde";
      const double tol = has_pde ? sc.compare_tol_pde : sc.compare_tol_ode;
      if (!runs[i].error.empty() || !runs[j].error.empty()) {
        const std::string& why =
            !runs[i].error.empty() ? runs[i].error : runs[j].error;
        std::cout << pair << ": solver failure (" << why << ")\n";
        out << pair << ",nan,nan," << format_double(tol) << ",0\n";
        all_pass = false;
        continue;
      }
      double dq, dQ;
      gaps_on_grid(runs[i].traj, runs[j].traj, sc.grid, dq, dQ);
      const bool pass = dq <= tol && dQ <= tol;
      all_pass = all_pass && pass;
      std::cout << pair << ": max|dq| = " << dq << ", max|dQ| = " << dQ
                << (pass ? "  PASS" : "  FAIL") << " (tol " << tol << ")\n";
      out << pair << ',' << format_double(dq) << ',' << format_double(dQ) << ','
          << format_double(tol) << ',' << (pass ? 1 : 0) << '\n';
    }
  }
  return all_pass ? 0 : 4;
}

}  // namespace pointwave
