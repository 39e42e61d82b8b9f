// pointwave: simulate, cross-check and analyze a point-coupled
// oscillator/wave-field system from flat key-value scenario files.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pointwave/commands.hpp"

namespace {

using namespace pointwave;

struct CommonFlags {
  std::string scenario_path;
  std::string out_dir = ".";
  double dt = 0.0;
  double t_end = 0.0;
  double dx = 0.0;
  unsigned threads = 0;
};

Scenario load_with_overrides(const CommonFlags& flags) {
  KeyValues kv = KeyValues::from_file(flags.scenario_path);
  if (flags.dt > 0.0) kv.override_value("grid.dt", format_double(flags.dt));
  if (flags.t_end > 0.0) kv.override_value("grid.t_end", format_double(flags.t_end));
  if (flags.dx > 0.0) kv.override_value("pde.dx", format_double(flags.dx));
  return Scenario::build(kv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point-coupled oscillator / wave-field simulation toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* simulate = app.add_subcommand("simulate", "run a scenario, write CSV");
  simulate->add_option("--scenario", flags.scenario_path, "scenario file")
      ->required();
  simulate->add_option("--out", flags.out_dir, "output directory");
  simulate->add_option("--dt", flags.dt, "override grid.dt");
  simulate->add_option("--t-end", flags.t_end, "override grid.t_end");
  simulate->add_option("--dx", flags.dx, "override pde.dx");
  simulate->add_option("--threads", flags.threads, "worker threads");

  auto* compare = app.add_subcommand(
      "compare", "run all applicable solvers, report pairwise gaps");
  compare->add_option("--scenario", flags.scenario_path, "scenario file")
      ->required();
  compare->add_option("--out", flags.out_dir, "output directory");
  compare->add_option("--dt", flags.dt, "override grid.dt");
  compare->add_option("--t-end", flags.t_end, "override grid.t_end");
  compare->add_option("--dx", flags.dx, "override pde.dx");
  compare->add_option("--threads", flags.threads, "worker threads");

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand(
      "scan-resonance", "amplitude/phase scan over incident wavenumbers");
  scan_cmd->add_option("--omega", scan.params.omega, "oscillator frequency");
  scan_cmd->add_option("--gamma", scan.params.gamma, "coupling rate")->required();
  scan_cmd->add_option("--k-min", scan.k_min, "lowest wavenumber");
  scan_cmd->add_option("--k-max", scan.k_max, "highest wavenumber");
  scan_cmd->add_option("--k-step", scan.k_step, "wavenumber step");
  scan_cmd->add_option("--amplitude", scan.amplitude, "incident amplitude");
  scan_cmd->add_option("--settle-time", scan.settle_time,
                       "transient settle time (gamma * settle >= 10)")
      ->required();
  scan_cmd->add_option("--dt", scan.dt, "integration step");
  scan_cmd->add_option("--threads", scan.threads, "worker threads");
  scan_cmd->add_option("--out", flags.out_dir, "output directory");

  ModelKind roots_kind = ModelKind::first;
  OscillatorParams roots_params;
  auto* roots_cmd =
      app.add_subcommand("roots", "characteristic-polynomial stability report");
  roots_cmd
      ->add_option_function<std::string>(
          "--model",
          [&roots_kind](const std::string& value) {
            if (value == "first") roots_kind = ModelKind::first;
            else if (value == "standard") roots_kind = ModelKind::standard;
            else throw CLI::ValidationError("--model", "expected first|standard");
          },
          "first | standard")
      ->required();
  roots_cmd->add_option("--omega", roots_params.omega, "oscillator frequency");
  roots_cmd->add_option("--gamma", roots_params.gamma, "first-model coupling");
  roots_cmd->add_option("--gamma1", roots_params.gamma1, "standard-model gamma1");
  roots_cmd->add_option("--gamma2", roots_params.gamma2, "standard-model gamma2");
  roots_cmd->add_option("--out", flags.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed())
      return cmd_simulate(load_with_overrides(flags), flags.out_dir);
    if (compare->parsed())
      return cmd_compare(load_with_overrides(flags), flags.out_dir);
    if (scan_cmd->parsed()) return cmd_scan_resonance(scan, flags.out_dir);
    if (roots_cmd->parsed()) {
      roots_params.validate();
      return cmd_roots(roots_kind, roots_params, flags.out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
