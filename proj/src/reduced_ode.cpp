#include "pointwave/reduced_ode.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace pointwave {

namespace {

constexpr double kGrowthThreshold = 1e-12;

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N, typename Rhs>
State<N> rk4_step(const Rhs& rhs, double t, double dt, const State<N>& y) {
  State<N> k1 = rhs(t, y);
  State<N> y2;
  for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * dt * k1[i];
  State<N> k2 = rhs(t + 0.5 * dt, y2);
  State<N> y3;
  for (std::size_t i = 0; i < N; ++i) y3[i] = y[i] + 0.5 * dt * k2[i];
  State<N> k3 = rhs(t + 0.5 * dt, y3);
  State<N> y4;
  for (std::size_t i = 0; i < N; ++i) y4[i] = y[i] + dt * k3[i];
  State<N> k4 = rhs(t + dt, y4);
  State<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Advance one grid step, optionally estimating the local error by step
// doubling and rejecting the step when it exceeds the tolerance.
template <std::size_t N, typename Rhs>
State<N> advance(const Rhs& rhs, double t, double dt, const State<N>& y,
                 const IntegratorOptions& opts) {
  State<N> full = rk4_step(rhs, t, dt, y);
  if (std::isfinite(opts.local_error_tol)) {
    State<N> half = rk4_step(rhs, t, 0.5 * dt, y);
    half = rk4_step(rhs, t + 0.5 * dt, 0.5 * dt, half);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      err = std::max(err, std::abs(full[i] - half[i]) / 15.0);
    if (err > opts.local_error_tol)
      throw SolverError("step rejected at t = " + std::to_string(t) +
                        ": local error estimate " + std::to_string(err) +
                        " exceeds tolerance " +
                        std::to_string(opts.local_error_tol));
  }
  return full;
}

void check_grid(const ReducedSystem& sys, const TimeGrid& grid) {
  if (std::abs(grid.s - sys.cfg.s) > 1e-12 * std::max(1.0, std::abs(sys.cfg.s)))
    throw ConfigError("integration grid must start at the field start time s");
}

}  // namespace

ReducedSystem ReducedSystem::first_model(const OscillatorParams& params,
                                         const FieldConfig& cfg,
                                         const InitialData& init,
                                         const Forcing& forcing) {
  params.validate();
  cfg.validate();
  ReducedSystem sys;
  sys.kind = ModelKind::first;
  sys.params = params;
  sys.cfg = cfg;
  sys.init = init;
  sys.forcing = forcing;
  sys.q01 = make_q01(cfg, init, forcing);
  return sys;
}

ReducedSystem ReducedSystem::standard_model(const OscillatorParams& params,
                                            const FieldConfig& cfg,
                                            const InitialData& init,
                                            const Forcing& forcing) {
  ReducedSystem sys = first_model(params, cfg, init, forcing);
  sys.kind = ModelKind::standard;
  return sys;
}

ReducedSystem& ReducedSystem::with_q01(TimeFunc f, TimeFunc fdot) {
  q01 = std::move(f);
  q01_dot = std::move(fdot);
  return *this;
}

Trajectory integrate_first_model(const ReducedSystem& sys, const InitialData& init,
                                 const TimeGrid& grid,
                                 const IntegratorOptions& opts) {
  check_grid(sys, grid);
  const double gamma = sys.params.gamma;
  const double omega2 = sys.params.omega * sys.params.omega;
  const double vs = init.qdot_init;  // frozen rank-one source 2 gamma qdot(s)
  const TimeFunc& q01 = sys.q01;
  const TimeFunc& f0 = sys.forcing.f0;

  // State: (q, qdot, y = Q - Q01, F = int_s^t f0).
  auto rhs = [&](double t, const State<4>& z) -> State<4> {
    const double q01_t = q01(t);
    const double f0_t = f0 ? f0(t) : 0.0;
    return State<4>{
        z[1],
        -2.0 * gamma * z[1] - omega2 * z[0] + 2.0 * gamma * vs +
            omega2 * q01_t + f0_t + 2.0 * gamma * z[3],
        -2.0 * gamma * (z[2] + q01_t - z[0]),
        f0_t};
  };

  Trajectory traj;
  traj.grid = grid;
  traj.q.resize(grid.n);
  traj.big_q.resize(grid.n);
  traj.qdot.resize(grid.n);

  State<4> z{init.q_init, init.qdot_init, 0.0, 0.0};
  traj.q[0] = z[0];
  traj.qdot[0] = z[1];
  traj.big_q[0] = q01(grid.s);  // Q(s) = Q01(s)
  for (std::size_t k = 1; k < grid.n; ++k) {
    z = advance(rhs, grid.time(k - 1), grid.dt, z, opts);
    traj.q[k] = z[0];
    traj.qdot[k] = z[1];
    traj.big_q[k] = z[2] + q01(grid.time(k));
  }
  return traj;
}

Trajectory integrate_first_model_insulated_q(const ReducedSystem& sys,
                                             const InitialData& init,
                                             const TimeGrid& grid,
                                             const IntegratorOptions& opts) {
  check_grid(sys, grid);
  const double gamma = sys.params.gamma;
  const double omega2 = sys.params.omega * sys.params.omega;
  const double vs = init.qdot_init;
  const TimeFunc& q01 = sys.q01;
  const TimeFunc& f0 = sys.forcing.f0;

  TimeFunc q01_dot = sys.q01_dot;
  if (!q01_dot) {
    const double h = 0.5 * grid.dt;
    q01_dot = [q01 = sys.q01, h](double t) {
      return (q01(t + h) - q01(t - h)) / (2.0 * h);
    };
  }

  // State: (q, qdot, w = Q - Q01, wdot, F = int_s^t f0). The q block is the
  // boxed insulated equation; the w block is the insulated second-order
  // equation for Q - Q01, which never references q itself.
  auto rhs = [&](double t, const State<5>& z) -> State<5> {
    const double f0_t = f0 ? f0(t) : 0.0;
    return State<5>{
        z[1],
        -2.0 * gamma * z[1] - omega2 * z[0] + 2.0 * gamma * vs +
            omega2 * q01(t) + f0_t + 2.0 * gamma * z[4],
        z[3],
        -2.0 * gamma * z[3] - omega2 * z[2] + 2.0 * gamma * vs -
            2.0 * gamma * q01_dot(t) + 2.0 * gamma * z[4],
        f0_t};
  };

  Trajectory traj;
  traj.grid = grid;
  traj.q.resize(grid.n);
  traj.big_q.resize(grid.n);
  traj.qdot.resize(grid.n);

  const double q01_s = q01(grid.s);
  State<5> z{init.q_init, init.qdot_init, 0.0,
             2.0 * gamma * (init.q_init - q01_s), 0.0};
  traj.q[0] = z[0];
  traj.qdot[0] = z[1];
  traj.big_q[0] = q01_s;
  for (std::size_t k = 1; k < grid.n; ++k) {
    z = advance(rhs, grid.time(k - 1), grid.dt, z, opts);
    traj.q[k] = z[0];
    traj.qdot[k] = z[1];
    traj.big_q[k] = z[2] + q01(grid.time(k));
  }
  return traj;
}

Trajectory integrate_standard_model(const ReducedSystem& sys,
                                    const InitialData& init, const TimeGrid& grid,
                                    const IntegratorOptions& opts) {
  check_grid(sys, grid);
  const double omega2 = sys.params.omega * sys.params.omega;
  const double g1 = sys.params.gamma1;
  const double g2 = sys.params.gamma2;
  const TimeFunc& phi01 = sys.q01;
  const TimeFunc& f0 = sys.forcing.f0;

  // State: (q0, q0dot, J = int_s^t q0).
  auto rhs = [&](double t, const State<3>& z) -> State<3> {
    const double f0_t = f0 ? f0(t) : 0.0;
    return State<3>{z[1],
                    -omega2 * z[0] + 2.0 * g2 * g1 * z[2] + g1 * phi01(t) + f0_t,
                    z[0]};
  };

  Trajectory traj;
  traj.grid = grid;
  traj.q.resize(grid.n);
  traj.big_q.resize(grid.n);
  traj.qdot.resize(grid.n);

  State<3> z{init.q_init, init.qdot_init, 0.0};
  traj.q[0] = z[0];
  traj.qdot[0] = z[1];
  traj.big_q[0] = phi01(grid.s);
  for (std::size_t k = 1; k < grid.n; ++k) {
    z = advance(rhs, grid.time(k - 1), grid.dt, z, opts);
    traj.q[k] = z[0];
    traj.qdot[k] = z[1];
    traj.big_q[k] = 2.0 * g2 * z[2] + phi01(grid.time(k));
  }
  return traj;
}

double reconstruct_field(const ReducedSystem& sys, const Trajectory& traj,
                         double t, double x, const quad::Options& q) {
  const double s = sys.cfg.s;
  const double lag = std::abs(x - sys.cfg.x0) / sys.cfg.c;
  const double base = u01(sys.cfg, sys.init, sys.forcing, t, x, q);

  const double retarded = t - lag;
  if (retarded >= s) {
    if (retarded > traj.grid.t_end + 0.5 * traj.grid.dt)
      throw OutOfRangeError("retarded time " + std::to_string(retarded) +
                            " beyond trajectory end");
    return traj.big_q_at(retarded) - sys.q01(retarded) + base;
  }
  if (t >= s) return base;  // causally disconnected from the coupling point

  // Backward evaluation: the advanced branch -(Q - Q01)(t + lag) needs the
  // trajectory before its own start, which a forward run cannot supply.
  if (t + lag < s)
    throw OutOfRangeError(
        "backward-cone evaluation needs the trajectory before its start");
  return base;
}

StabilityReport characteristic_roots(ModelKind kind,
                                     const OscillatorParams& params) {
  StabilityReport report;
  const double omega2 = params.omega * params.omega;

  if (kind == ModelKind::first) {
    const double disc = params.gamma * params.gamma - omega2;
    std::complex<double> sq =
        disc >= 0.0 ? std::complex<double>(std::sqrt(disc), 0.0)
                    : std::complex<double>(0.0, std::sqrt(-disc));
    report.roots = {std::complex<double>(0.0, 0.0), -params.gamma + sq,
                    -params.gamma - sq};
  } else {
    // lambda^3 + omega^2 lambda - 2 gamma1 gamma2 = 0 via its companion
    // matrix; eigenvalues from the general (non-symmetric) solver.
    const double p = omega2;
    const double r = -2.0 * params.gamma1 * params.gamma2;
    Eigen::Matrix3d companion;
    companion << 0.0, 0.0, -r,
                 1.0, 0.0, -p,
                 0.0, 1.0, 0.0;
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion);
    for (int i = 0; i < 3; ++i) report.roots[i] = solver.eigenvalues()[i];
  }

  std::sort(report.roots.begin(), report.roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() > b.real();
              return a.imag() > b.imag();
            });
  report.growth_rate = report.roots[0].real();
  if (report.growth_rate > kGrowthThreshold)
    report.classification = StabilityReport::Classification::growing;
  else if (report.growth_rate >= -kGrowthThreshold)
    report.classification = StabilityReport::Classification::marginal;
  else
    report.classification = StabilityReport::Classification::decaying;
  return report;
}

const char* to_string(StabilityReport::Classification c) {
  switch (c) {
    case StabilityReport::Classification::decaying: return "decaying";
    case StabilityReport::Classification::marginal: return "marginal";
    case StabilityReport::Classification::growing: return "growing";
  }
  return "unknown";
}

}  // namespace pointwave
