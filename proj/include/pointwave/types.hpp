#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pointwave {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a scenario file or parameter set is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when a solver cannot complete a run (instability, rejected step,
/// violated precondition, non-convergent implicit solve, ...).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
/// Carries the offending subinterval for diagnostics.
class QuadratureError : public SolverError {
 public:
  QuadratureError(const std::string& msg, double a, double b)
      : SolverError(msg + " on interval [" + std::to_string(a) + ", " +
                    std::to_string(b) + "]"),
        interval_a(a),
        interval_b(b) {}
  double interval_a;
  double interval_b;
};

/// Undamped driving exactly at the oscillator frequency: the steady-state
/// denominator vanishes and no bounded harmonic response exists.
class ResonanceSingularityError : public SolverError {
 public:
  using SolverError::SolverError;
};

/// A lookup (retarded time, probe point, ...) fell outside the stored data.
class OutOfRangeError : public SolverError {
 public:
  using SolverError::SolverError;
};

// ---------------------------------------------------------------------------
// Callables
// ---------------------------------------------------------------------------

using Profile = std::function<double(double)>;        // x -> value
using TimeFunc = std::function<double(double)>;       // t -> value
using SpaceTimeFunc = std::function<double(double, double)>;  // (t,x) -> value

/// Empty std::function is treated as identically zero throughout.
inline double eval_or_zero(const Profile& f, double x) {
  return f ? f(x) : 0.0;
}
inline double eval_or_zero(const SpaceTimeFunc& f, double t, double x) {
  return f ? f(t, x) : 0.0;
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Oscillator parameters. The mass and elasticity of the underlying physical
/// system are absorbed into the angular frequency and the coupling rate.
struct OscillatorParams {
  double omega = 1.0;   // angular frequency, > 0
  double gamma = 0.0;   // coupling/damping rate, >= 0
  double gamma1 = 0.0;  // force coupling (standard model only)
  double gamma2 = 0.0;  // source coupling (standard model only)

  void validate() const {
    if (!(omega > 0.0)) throw ConfigError("omega must be > 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  }

  /// Squared shifted frequency omega^2 - gamma^2. Negative in the
  /// overdamped regime, zero at critical damping.
  double omega_gamma_sq() const { return omega * omega - gamma * gamma; }
};

/// Wave-field configuration: speed, coupling point, start time and the
/// spatial interval used by grid solvers. Characteristic (mesh-free)
/// evaluations ignore the interval.
struct FieldConfig {
  double c = 1.0;    // wave speed, > 0
  double x0 = 0.0;   // coupling position
  double s = 0.0;    // initial time
  double x_min = -1.0;
  double x_max = 1.0;

  void validate() const {
    if (!(c > 0.0)) throw ConfigError("wave speed c must be > 0");
    if (!(x_min < x0 && x0 < x_max))
      throw ConfigError("domain must satisfy x_min < x0 < x_max");
  }
};

/// Initial state of oscillator and field. The field profiles are callables
/// because characteristics leave any fixed grid; they must be evaluable
/// wherever a characteristic can reach during the run.
///
/// udot_primitive is optional: any W with W' = udot_init. When present the
/// d'Alembert velocity integral is the difference of two point values and
/// needs no quadrature (the formulas only ever use the primitive).
struct InitialData {
  double q_init = 0.0;
  double qdot_init = 0.0;
  Profile u_init;          // x -> u(s,x); empty = 0
  Profile udot_init;       // x -> du/dt(s,x); empty = 0
  Profile udot_primitive;  // optional antiderivative of udot_init

  static InitialData rest() { return InitialData{}; }
};

/// External forcing. f1_primitive is any F with dF/dx = f1; when absent it
/// is constructed by numerical antiderivative in x. Outputs never depend on
/// which primitive is used.
struct Forcing {
  TimeFunc f0;                // t -> oscillator force per unit mass; empty = 0
  SpaceTimeFunc f1;           // (t,x) -> field force density; empty = 0
  SpaceTimeFunc f1_primitive; // optional x-antiderivative of f1

  bool has_f0() const { return static_cast<bool>(f0); }
  bool has_f1() const { return static_cast<bool>(f1); }
};

/// Uniform time grid with samples s + k*dt, k = 0..n-1.
struct TimeGrid {
  double s = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t n = 0;

  TimeGrid() = default;
  TimeGrid(double start, double end, double step) : s(start), t_end(end), dt(step) {
    if (!(step > 0.0)) throw ConfigError("time step dt must be > 0");
    if (!(end > start)) throw ConfigError("t_end must be > s");
    n = static_cast<std::size_t>(std::floor((end - start) / step * (1.0 + 1e-12))) + 1;
  }

  double time(std::size_t k) const { return s + static_cast<double>(k) * dt; }
};

/// Uniformly sampled oscillator history: q(t), Q(t) and optionally qdot(t).
struct Trajectory {
  TimeGrid grid;
  std::vector<double> q;
  std::vector<double> big_q;
  std::vector<double> qdot;  // may be empty

  bool has_qdot() const { return !qdot.empty(); }

  /// Linear interpolation of a sample array at time t. Throws when t falls
  /// outside the grid (beyond a half-step slack at the ends).
  double interp(const std::vector<double>& values, double t) const;
  double q_at(double t) const { return interp(q, t); }
  double big_q_at(double t) const { return interp(big_q, t); }
};

/// Field values u(t, xs) at a single time.
struct FieldFrame {
  double t = 0.0;
  std::vector<double> xs;
  std::vector<double> u;
};

inline double Trajectory::interp(const std::vector<double>& values, double t) const {
  if (values.size() != grid.n)
    throw OutOfRangeError("trajectory sample array does not match its grid");
  const double pos = (t - grid.s) / grid.dt;
  if (pos < -0.5 || pos > static_cast<double>(grid.n - 1) + 0.5)
    throw OutOfRangeError("time " + std::to_string(t) + " outside trajectory grid");
  if (pos <= 0.0) return values.front();
  const auto last = static_cast<double>(grid.n - 1);
  if (pos >= last) return values.back();
  const auto k = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

}  // namespace pointwave
