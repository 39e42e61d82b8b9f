#pragma once

#include <string>
#include <vector>

#include "pointwave/scenario.hpp"

namespace pointwave {

// Command layer behind the CLI. Everything here throws ConfigError /
// SolverError; the CLI maps those onto exit codes 2 and 3. Comparison
// failures are ordinary returns (exit 4).

/// 17-significant-digit decimal formatting used for all CSV output.
std::string format_double(double v);

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          bool include_qdot);
void write_frame_csv(const std::string& path, const FieldFrame& frame);

/// Run the scenario with its selected solver; write `trajectory.csv` and one
/// `field_t<stamp>.csv` per requested output time into out_dir. Returns 0.
int cmd_simulate(const Scenario& scenario, const std::string& out_dir);

struct ScanOptions {
  OscillatorParams params;
  double k_min = 0.5;
  double k_max = 1.5;
  double k_step = 2.5e-3;
  double amplitude = 1.0;
  double settle_time = 0.0;  // requires gamma * settle_time >= 10
  double dt = 5e-3;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct ScanRow {
  double k = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;
  bool fit_ok = false;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  double k_star = 0.0;          // argmax of the fitted amplitude
  double peak_amplitude = 0.0;
};

/// Drive the first model with an incident sine at each wavenumber, fit
/// amplitude and phase of q over the final 20% of the run by least squares,
/// and report the argmax. Runs the wavenumbers in parallel.
ScanResult scan_resonance(const ScanOptions& opts);

/// scan_resonance + `scan.csv` (k, amplitude, phase, fit_ok) in out_dir and
/// a human-readable summary on stdout. Returns 0.
int cmd_scan_resonance(const ScanOptions& opts, const std::string& out_dir);

/// Characteristic-root report: text on stdout, `roots.csv` in out_dir.
int cmd_roots(ModelKind kind, const OscillatorParams& params,
              const std::string& out_dir);

/// Run every solver applicable to the scenario, print pairwise sup-norm gaps
/// in q and Q with pass/fail against the configured tolerances, and write
/// `compare.csv`. Returns 0 when every pair passes, 4 otherwise.
int cmd_compare(const Scenario& scenario, const std::string& out_dir);

}  // namespace pointwave
