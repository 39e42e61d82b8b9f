#include "pointwave/pde_direct.hpp"

#include <algorithm>
#include <cmath>

namespace pointwave {

namespace {

struct Workspace {
  std::vector<double> xs;
  std::size_t i0 = 0;      // index of the coupling node
  std::size_t n = 0;       // node count
  double dx = 0.0, dt = 0.0, lambda = 0.0;
};

Workspace make_grid(const FieldConfig& cfg, const GridScheme& scheme,
                    double t_end) {
  cfg.validate();
  Workspace w;
  w.dx = scheme.dx;
  if (!(w.dx > 0.0)) throw ConfigError("dx must be > 0");
  w.dt = scheme.dt > 0.0 ? scheme.dt : scheme.courant * w.dx / cfg.c;
  w.lambda = cfg.c * w.dt / w.dx;
  if (w.lambda > 1.0 + 1e-9)
    throw SolverError("Courant number " + std::to_string(w.lambda) +
                      " violates the stability bound c dt/dx <= 1");
  if (scheme.source_model == SourceModel::characteristics_exact &&
      std::abs(w.lambda - 1.0) > 1e-9)
    throw SolverError("characteristics_exact requires courant = 1");

  const auto n_left = static_cast<std::size_t>(
      std::ceil((cfg.x0 - cfg.x_min) / w.dx - 1e-9));
  const auto n_right = static_cast<std::size_t>(
      std::ceil((cfg.x_max - cfg.x0) / w.dx - 1e-9));
  w.i0 = n_left;
  w.n = n_left + n_right + 1;
  w.xs.resize(w.n);
  for (std::size_t i = 0; i < w.n; ++i)
    w.xs[i] = cfg.x0 + (static_cast<double>(i) - static_cast<double>(n_left)) * w.dx;

  const double horizon = cfg.c * (t_end - cfg.s);
  if (!(cfg.x0 - w.xs.front() > horizon && w.xs.back() - cfg.x0 > horizon))
    throw SolverError(
        "domain edges must be causally disconnected from x0: need "
        "|edge - x0| > c (t_end - s)");
  return w;
}

struct Oscillator {
  double q, qdot;
  double omega2, coupling_gamma;  // gamma (first) or gamma1 (standard)
  ModelKind model;
  const TimeFunc* f0;

  double accel(double t, double big_q) const {
    const double drive = *f0 ? (*f0)(t) : 0.0;
    if (model == ModelKind::first)
      return -omega2 * (q - big_q) + drive;
    return -omega2 * q + coupling_gamma * big_q + drive;
  }
};

}  // namespace

CoupledRun run_coupled(const FieldConfig& cfg, const OscillatorParams& params,
                       const InitialData& init, const Forcing& forcing,
                       const GridScheme& scheme, double t_end, ModelKind model) {
  params.validate();
  Workspace w = make_grid(cfg, scheme, t_end);
  const auto n_steps =
      static_cast<std::size_t>(std::ceil((t_end - cfg.s) / w.dt - 1e-9));
  if (n_steps == 0) throw ConfigError("t_end must exceed s by at least one step");

  const double dt = w.dt;
  const double dx = w.dx;
  const double c = cfg.c;
  const double gamma = model == ModelKind::first ? params.gamma : params.gamma2;
  // Field source strength at the coupling node: -4 gamma c (Q - q) for the
  // first model, +4 gamma2 c q0 for the standard one.
  const double source_sign = model == ModelKind::first ? -4.0 * gamma * c
                                                       : 4.0 * gamma * c;
  const bool have_f1 = forcing.has_f1();

  Oscillator osc{init.q_init, init.qdot_init, params.omega * params.omega,
                 model == ModelKind::first ? params.gamma : params.gamma1, model,
                 &forcing.f0};

  Trajectory traj;
  traj.grid = TimeGrid(cfg.s, cfg.s + static_cast<double>(n_steps) * dt, dt);
  traj.q.resize(n_steps + 1);
  traj.big_q.resize(n_steps + 1);
  traj.qdot.resize(n_steps + 1);

  std::vector<FieldFrame> frames;
  auto snapshot = [&](double t, const std::vector<double>& u) {
    frames.push_back(FieldFrame{t, w.xs, u});
  };
  std::vector<std::size_t> extra_steps;
  for (double t_snap : scheme.snapshot_times) {
    const double pos = (t_snap - cfg.s) / dt;
    if (pos >= -0.5 && pos <= static_cast<double>(n_steps) + 0.5)
      extra_steps.push_back(static_cast<std::size_t>(
          std::clamp(std::llround(pos), 0ll, static_cast<long long>(n_steps))));
  }
  auto wants_snapshot = [&](std::size_t step) {
    if (step == n_steps) return true;
    if (scheme.snapshot_stride > 0 && step % scheme.snapshot_stride == 0)
      return true;
    for (std::size_t s : extra_steps)
      if (s == step) return true;
    return false;
  };

  std::vector<double> u_cur(w.n), u_prev(w.n), u_next(w.n);
  for (std::size_t i = 0; i < w.n; ++i)
    u_cur[i] = eval_or_zero(init.u_init, w.xs[i]);

  traj.q[0] = osc.q;
  traj.qdot[0] = osc.qdot;
  traj.big_q[0] = u_cur[w.i0];
  snapshot(cfg.s, u_cur);

  const std::size_t last = w.n - 1;

  // Coupling value entering the delta source: h = Q - q for the first model
  // (feeds back through the node value, implicit endpoint), h = q0 for the
  // standard one (no feedback through u). h^{n+1} = h_u_coeff * u^{n+1}(x0)
  // + h_indep(q^{n+1}).
  const double h_u_coeff = model == ModelKind::first ? 1.0 : 0.0;
  auto h_of = [&](double u_node, double q_osc) {
    return model == ModelKind::first ? (u_node - q_osc) : q_osc;
  };
  auto h_indep = [&](double q_osc) {
    return model == ModelKind::first ? -q_osc : q_osc;
  };

  if (scheme.source_model == SourceModel::characteristics_exact) {
    // Three-level scheme at courant 1: free transport is exact, the coupling
    // enters as the time integral of the source over each characteristic
    // diamond. The integral is closed with the time-symmetric average
    // (h^{n+1} + h^{n-1})/2 and the implicit endpoint solved as a scalar at
    // the node: the explicit midpoint closure has a parasitic node mode
    // growing like e^{2 gamma t}, the symmetric implicit one damps both
    // node modes at the physical rate.
    double t = cfg.s;
    const double a0 = osc.accel(t, u_cur[w.i0]);
    double h_prev2 = 0.0;  // h^{n-1}, seeded after the first step
    u_prev = u_cur;
    {
      // First step from the initial data: half-diamond d'Alembert update,
      // source by one-step trapezoid with the implicit endpoint.
      const double q_new = osc.q + dt * osc.qdot + 0.5 * dt * dt * a0;
      const double h0 = h_of(u_cur[w.i0], osc.q);
      for (std::size_t i = 1; i < last; ++i) {
        double vel_int;  // int_{x-dx}^{x+dx} udot(s,.) dxi
        if (init.udot_primitive) {
          vel_int = init.udot_primitive(w.xs[i] + dx) -
                    init.udot_primitive(w.xs[i] - dx);
        } else if (init.udot_init) {
          // Simpson on the three stencil points; only the start-up step.
          vel_int = dx / 3.0 *
                    (init.udot_init(w.xs[i] - dx) + 4.0 * init.udot_init(w.xs[i]) +
                     init.udot_init(w.xs[i] + dx));
        } else {
          vel_int = 0.0;
        }
        double val = 0.5 * (u_prev[i + 1] + u_prev[i - 1]) + vel_int / (2.0 * c);
        if (have_f1) val += 0.5 * dt * dt * forcing.f1(t, w.xs[i]);
        u_next[i] = val;
      }
      {
        const double strength = source_sign / (2.0 * c) * 0.5 * dt;
        u_next[w.i0] = (u_next[w.i0] + strength * (h0 + h_indep(q_new))) /
                       (1.0 - strength * h_u_coeff);
      }
      u_next[0] = u_prev[1];
      u_next[last] = u_prev[last - 1];
      u_cur.swap(u_next);

      const double big_q_new = u_cur[w.i0];
      osc.q = q_new;
      const double a_new = osc.accel(t + dt, big_q_new);
      osc.qdot += 0.5 * dt * (a0 + a_new);
      traj.q[1] = osc.q;
      traj.qdot[1] = osc.qdot;
      traj.big_q[1] = big_q_new;
      h_prev2 = h0;
      if (wants_snapshot(1)) snapshot(t + dt, u_cur);
    }

    for (std::size_t step = 2; step <= n_steps; ++step) {
      t = cfg.s + static_cast<double>(step - 1) * dt;  // center of the diamond
      const double a_n = osc.accel(t, u_cur[w.i0]);
      const double q_new = osc.q + dt * osc.qdot + 0.5 * dt * dt * a_n;
      const double h_n = h_of(u_cur[w.i0], osc.q);
      for (std::size_t i = 1; i < last; ++i) {
        double val = u_cur[i + 1] + u_cur[i - 1] - u_prev[i];
        if (have_f1) val += dt * dt * forcing.f1(t, w.xs[i]);
        u_next[i] = val;
      }
      {
        // int_{t-dt}^{t+dt} h dtau ~ dt (h^{n-1} + h^{n+1}).
        const double strength = source_sign / (2.0 * c) * dt;
        u_next[w.i0] = (u_next[w.i0] + strength * (h_prev2 + h_indep(q_new))) /
                       (1.0 - strength * h_u_coeff);
      }
      u_next[0] = u_cur[1];
      u_next[last] = u_cur[last - 1];
      u_prev.swap(u_cur);
      u_cur.swap(u_next);

      const double big_q_new = u_cur[w.i0];
      osc.q = q_new;
      const double a_new = osc.accel(t + dt, big_q_new);
      osc.qdot += 0.5 * dt * (a_n + a_new);

      traj.q[step] = osc.q;
      traj.qdot[step] = osc.qdot;
      traj.big_q[step] = big_q_new;
      h_prev2 = h_n;
      if (wants_snapshot(step)) snapshot(t + dt, u_cur);
    }
  } else {
    // nearest_node: field values at integer steps, field velocity at half
    // steps, delta realized as 1/dx at the coupling node. The source uses
    // the same time-symmetric average (h^{n-1} + h^{n+1})/2 with the
    // implicit endpoint solved at the node (see above). First-order Mur
    // updates at the edges absorb outgoing characteristics.
    std::vector<double> v(w.n);
    for (std::size_t i = 0; i < w.n; ++i)
      v[i] = eval_or_zero(init.udot_init, w.xs[i]);

    const double c2 = c * c;
    const double inv_dx2 = 1.0 / (dx * dx);
    const double mur = (w.lambda - 1.0) / (w.lambda + 1.0);

    // Laplacian kick plus the implicit node source; h_old is h^{n-1} for
    // interior kicks, h^0 for the start-up half kick.
    auto kick = [&](double t, double weight, double h_old, double q_new) {
      for (std::size_t i = 1; i < last; ++i) {
        double a = c2 * (u_cur[i + 1] - 2.0 * u_cur[i] + u_cur[i - 1]) * inv_dx2;
        if (have_f1) a += forcing.f1(t, w.xs[i]);
        v[i] += weight * dt * a;
      }
      const double beta = weight * dt * source_sign / dx;
      const double known = h_old + h_u_coeff * u_cur[w.i0] + h_indep(q_new);
      v[w.i0] = (v[w.i0] + 0.5 * beta * known) /
                (1.0 - 0.5 * beta * h_u_coeff * dt);
    };

    double t = cfg.s;
    {
      const double a0 = osc.accel(t, u_cur[w.i0]);
      const double q1 = osc.q + dt * osc.qdot + 0.5 * dt * dt * a0;
      kick(t, 0.5, h_of(u_cur[w.i0], osc.q), q1);  // v at the first half step
    }
    for (std::size_t step = 1; step <= n_steps; ++step) {
      const double big_q_n = u_cur[w.i0];
      const double a_n = osc.accel(t, big_q_n);
      const double q_new = osc.q + dt * osc.qdot + 0.5 * dt * dt * a_n;
      const double h_n = h_of(u_cur[w.i0], osc.q);

      const double left0 = u_cur[0], left1 = u_cur[1];
      const double right0 = u_cur[last], right1 = u_cur[last - 1];
      for (std::size_t i = 1; i < last; ++i) u_cur[i] += dt * v[i];
      u_cur[0] = left1 + mur * (u_cur[1] - left0);
      u_cur[last] = right1 + mur * (u_cur[last - 1] - right0);

      const double t_new = cfg.s + static_cast<double>(step) * dt;
      const double big_q_new = u_cur[w.i0];
      osc.q = q_new;
      const double a_new = osc.accel(t_new, big_q_new);
      osc.qdot += 0.5 * dt * (a_n + a_new);

      traj.q[step] = osc.q;
      traj.qdot[step] = osc.qdot;
      traj.big_q[step] = big_q_new;
      if (wants_snapshot(step)) snapshot(t_new, u_cur);

      if (step < n_steps) {
        // Kick centered at t_new: averages h^{step-1} (h_n) with the
        // implicit h^{step+1}, whose q part is q^{step+1} predicted here.
        const double q_next = osc.q + dt * osc.qdot + 0.5 * dt * dt * a_new;
        kick(t_new, 1.0, h_n, q_next);
      }
      t = t_new;
    }
  }

  return CoupledRun{std::move(traj), std::move(frames)};
}

double probe(const std::vector<FieldFrame>& frames, double t, double x) {
  if (frames.empty()) throw OutOfRangeError("probe: no stored frames");
  const double t_first = frames.front().t;
  const double t_last = frames.back().t;
  const double slack_t = 1e-9 * std::max(1.0, std::abs(t_last));
  if (t < t_first - slack_t || t > t_last + slack_t)
    throw OutOfRangeError("probe: time " + std::to_string(t) +
                          " outside stored frames");

  auto upper = std::lower_bound(
      frames.begin(), frames.end(), t,
      [](const FieldFrame& f, double value) { return f.t < value; });
  std::size_t hi = static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(std::distance(frames.begin(), upper),
                               static_cast<std::ptrdiff_t>(frames.size()) - 1));
  std::size_t lo = hi > 0 ? hi - 1 : 0;
  double wt = 0.0;
  if (hi != lo) {
    wt = (t - frames[lo].t) / (frames[hi].t - frames[lo].t);
    wt = std::clamp(wt, 0.0, 1.0);
    // Snap to stored frames so exact hits return stored values exactly.
    if (wt < 1e-9) hi = lo;
    else if (wt > 1.0 - 1e-9) lo = hi;
  }

  auto sample = [&](const FieldFrame& f) {
    const auto& xs = f.xs;
    const double slack_x = 1e-9 * std::max(1.0, std::abs(xs.back()));
    if (x < xs.front() - slack_x || x > xs.back() + slack_x)
      throw OutOfRangeError("probe: position " + std::to_string(x) +
                            " outside stored domain");
    const double dx = xs[1] - xs[0];
    double pos = (x - xs.front()) / dx;
    pos = std::clamp(pos, 0.0, static_cast<double>(xs.size() - 1));
    // Snap to grid nodes within rounding slack.
    if (std::abs(pos - std::round(pos)) < 1e-9) pos = std::round(pos);
    const auto k = static_cast<std::size_t>(
        std::min(pos, static_cast<double>(xs.size() - 2)));
    const double wx = pos - static_cast<double>(k);
    if (wx == 0.0) return f.u[k];
    return (1.0 - wx) * f.u[k] + wx * f.u[k + 1];
  };

  if (hi == lo) return sample(frames[lo]);
  return (1.0 - wt) * sample(frames[lo]) + wt * sample(frames[hi]);
}

}  // namespace pointwave
