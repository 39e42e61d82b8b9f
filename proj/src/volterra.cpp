#include "pointwave/volterra.hpp"

#include <cmath>
#include <memory>

#include "pointwave/quadrature.hpp"

namespace pointwave {

namespace {

constexpr double kPivotFloor = 1e-12;

// Lag table for a stationary kernel on a uniform grid, plus the index from
// which the table is (bitwise) saturated. Sums against a saturated tail are
// regrouped through a running prefix, which is algebraically the same full
// history at a fraction of the cost.
struct LagTable {
  std::vector<double> kappa;
  std::size_t sat_index;  // kappa[m] == sat for all m >= sat_index
  double sat;
};

LagTable tabulate(const MemoryKernel& kernel, double dt, std::size_t n) {
  if (!kernel.stationary)
    throw ConfigError("product integration requires a stationary kernel");
  LagTable table;
  table.kappa.resize(n);
  table.sat = kernel.saturation_value;
  table.kappa[0] = kernel.zero_lag;
  for (std::size_t m = 1; m < n; ++m) {
    const double lag = static_cast<double>(m) * dt;
    table.kappa[m] = lag >= kernel.saturation_lag ? kernel.saturation_value
                                                  : kernel.at_lag(lag);
  }
  std::size_t sat = n;
  while (sat > 0 && table.kappa[sat - 1] == table.sat) --sat;
  table.sat_index = sat;
  return table;
}

// Trapezoid product-integration sum over past nodes i < j:
//   sum_{i<j} w_i kappa[j-i] values[i],  w_0 = dt/2, w_i = dt otherwise,
// where prefix = sum_{i<j} w_i values[i] is maintained by the caller.
double memory_sum(const LagTable& t, const std::vector<double>& values,
                  std::size_t j, double dt, double prefix) {
  double acc = t.sat * prefix;
  const std::size_t start = j > t.sat_index ? j - t.sat_index : 0;
  for (std::size_t i = start; i < j; ++i) {
    const double w = i == 0 ? 0.5 * dt : dt;
    acc += w * (t.kappa[j - i] - t.sat) * values[i];
  }
  return acc;
}

std::vector<double> sample_time_func(const TimeFunc& f, const TimeGrid& grid) {
  std::vector<double> out(grid.n, 0.0);
  if (f)
    for (std::size_t k = 0; k < grid.n; ++k) out[k] = f(grid.time(k));
  return out;
}

// Composite Simpson with uniform spacing; 3/8 rule on the last three cells
// when the cell count is odd.
double simpson(const std::vector<double>& y, double dt) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * dt * (y[0] + y[1]);
  std::size_t cells = n - 1;
  double acc = 0.0;
  std::size_t limit = cells % 2 == 0 ? cells : cells - 3;
  for (std::size_t i = 0; i + 2 <= limit; i += 2)
    acc += dt / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (cells % 2 != 0) {
    if (cells >= 3) {
      const std::size_t i = cells - 3;
      acc += 3.0 * dt / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]);
    } else {
      acc += 0.5 * dt * (y[0] + y[1]);
    }
  }
  return acc;
}

}  // namespace

Mollifier Mollifier::gaussian(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("mollifier width must be > 0");
  const double sigma = alpha / 3.0;
  Mollifier m;
  m.width = alpha;
  m.saturation_radius = 3.0 * alpha;  // erf flat in double beyond ~8.4 sigma
  m.shape = [sigma](double y) {
    const double z = y / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
  };
  m.primitive = [sigma](double y) {
    return 0.5 * (1.0 + std::erf(y / (sigma * std::sqrt(2.0))));
  };
  return m;
}

Mollifier Mollifier::bump(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("mollifier width must be > 0");
  // exp(-1/(1-z^2)) on (-1,1), mass-normalized, then scaled to width alpha.
  auto raw = [](double z) {
    const double w = 1.0 - z * z;
    return w > 0.0 ? std::exp(-1.0 / w) : 0.0;
  };
  const double mass = quad::integrate(raw, -1.0, 1.0, {1e-14, 4000});

  // Primitive tabulated once on [-1, 1] with exact slopes at the nodes;
  // cubic Hermite interpolation keeps d(primitive)/dx = shape well below
  // quadrature tolerance.
  constexpr std::size_t kCells = 2000;
  auto nodes = std::make_shared<std::vector<double>>(kCells + 1);
  auto cum = std::make_shared<std::vector<double>>(kCells + 1);
  auto slope = std::make_shared<std::vector<double>>(kCells + 1);
  const double h = 2.0 / kCells;
  (*cum)[0] = 0.0;
  for (std::size_t i = 0; i <= kCells; ++i) {
    (*nodes)[i] = -1.0 + static_cast<double>(i) * h;
    (*slope)[i] = raw((*nodes)[i]) / mass;
    if (i > 0)
      (*cum)[i] = (*cum)[i - 1] +
                  quad::integrate(raw, (*nodes)[i - 1], (*nodes)[i], {1e-15, 400}) / mass;
  }

  Mollifier m;
  m.width = alpha;
  m.saturation_radius = alpha;
  m.shape = [alpha, raw, mass](double y) {
    return raw(y / alpha) / (mass * alpha);
  };
  m.primitive = [alpha, nodes, cum, slope, h](double y) {
    const double z = y / alpha;
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return 1.0;
    const auto i = std::min<std::size_t>(
        static_cast<std::size_t>((z + 1.0) / h), nodes->size() - 2);
    const double t = (z - (*nodes)[i]) / h;
    const double p0 = (*cum)[i], p1 = (*cum)[i + 1];
    // Slopes in z; the 1/alpha from d/dy cancels against the alpha-scaled h.
    const double m0 = (*slope)[i] * h, m1 = (*slope)[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 +
           (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1;
  };
  return m;
}

Mollifier Mollifier::step() {
  Mollifier m;
  m.width = 0.0;
  m.shape = {};  // not pointwise evaluable in the sharp limit
  m.primitive = [](double y) { return y > 0.0 ? 1.0 : 0.0; };
  return m;
}

MemoryKernel build_kernel(const FieldConfig& cfg, const Mollifier& m) {
  cfg.validate();
  MemoryKernel k;
  k.c = cfg.c;
  k.saturation_value = 0.5 / cfg.c;
  const Profile primitive = m.primitive;
  const double c = cfg.c;
  k.eval = [primitive, c](double t, double tau) {
    return (primitive(c * (t - tau)) - primitive(c * (tau - t))) / (2.0 * c);
  };
  if (m.width == 0.0) {
    // Dirac limit: 1/(2c) for any positive lag; the causal diagonal takes
    // the same value so that the acceleration integral telescopes exactly.
    k.zero_lag = 0.5 / cfg.c;
    k.saturation_lag = 0.0;
  } else {
    k.zero_lag = 0.0;
    k.saturation_lag = m.saturation_radius / cfg.c;
  }
  return k;
}

Trajectory solve_q_nonlocal(const FieldConfig& cfg, const OscillatorParams& params,
                            const MemoryKernel& kernel, const TimeFunc& q01,
                            const Forcing& forcing, const InitialData& init,
                            const TimeGrid& grid) {
  params.validate();
  const std::size_t n = grid.n;
  const double dt = grid.dt;
  const double omega2 = params.omega * params.omega;
  const double gc = params.gamma * cfg.c;
  const LagTable table = tabulate(kernel, dt, n);

  const std::vector<double> big_q01 = sample_time_func(q01, grid);
  const std::vector<double> f0 = sample_time_func(forcing.f0, grid);
  const bool have_f0 = forcing.has_f0();

  Trajectory traj;
  traj.grid = grid;
  traj.q.resize(n);
  traj.big_q.resize(n);
  traj.qdot.resize(n);

  std::vector<double> accel(n, 0.0);
  traj.q[0] = init.q_init;
  traj.qdot[0] = init.qdot_init;
  accel[0] = -omega2 * init.q_init + omega2 * big_q01[0] + f0[0];

  const double pivot_check = 1.0 + 4.0 * gc * dt * table.kappa[0] / 2.0;
  if (std::abs(pivot_check) < kPivotFloor)
    throw SolverError("ill-conditioned step: |1 + 4 gamma_c dt K0(t,t)/2| = " +
                      std::to_string(std::abs(pivot_check)));
  const double pivot = pivot_check + omega2 * dt * dt / 6.0;

  double prefix_a = 0.0;   // sum_{i<j} w_i a_i
  double prefix_f = 0.0;   // sum_{i<j} w_i f0_i
  for (std::size_t j = 1; j < n; ++j) {
    prefix_a += (j == 1 ? 0.5 * dt : dt) * accel[j - 1];
    const double mem_a = memory_sum(table, accel, j, dt, prefix_a);

    double forcing_term = f0[j];
    if (have_f0) {
      prefix_f += (j == 1 ? 0.5 * dt : dt) * f0[j - 1];
      const double mem_f =
          memory_sum(table, f0, j, dt, prefix_f) + 0.5 * dt * table.kappa[0] * f0[j];
      forcing_term += 4.0 * gc * mem_f;
    }

    // q_j = predictor + dt^2/6 a_j (linear acceleration over the step).
    const double predictor =
        traj.q[j - 1] + dt * traj.qdot[j - 1] + dt * dt / 3.0 * accel[j - 1];
    accel[j] = (-omega2 * predictor + omega2 * big_q01[j] + forcing_term -
                4.0 * gc * mem_a) /
               pivot;
    traj.q[j] = predictor + dt * dt / 6.0 * accel[j];
    traj.qdot[j] = traj.qdot[j - 1] + 0.5 * dt * (accel[j - 1] + accel[j]);
  }

  // Q from its own Volterra equation, same product integration.
  traj.big_q[0] = big_q01[0];
  std::vector<double> qq(n, 0.0);  // Q_i - q_i
  qq[0] = traj.big_q[0] - traj.q[0];
  const double pivot_q = 1.0 + 4.0 * gc * 0.5 * dt * table.kappa[0];
  double prefix_qq = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    prefix_qq += (j == 1 ? 0.5 * dt : dt) * qq[j - 1];
    const double mem = memory_sum(table, qq, j, dt, prefix_qq);
    traj.big_q[j] =
        (big_q01[j] - 4.0 * gc * mem + 4.0 * gc * 0.5 * dt * table.kappa[0] * traj.q[j]) /
        pivot_q;
    qq[j] = traj.big_q[j] - traj.q[j];
  }
  return traj;
}

Trajectory general_closure(const FieldConfig& cfg, const MemoryKernel& kernel,
                           const InteractionFunc& u0_interaction,
                           const PointForce& f_pf, const InitialData& init,
                           const TimeGrid& grid, double mass) {
  if (!(mass > 0.0)) throw ConfigError("mass must be > 0");
  const std::size_t n = grid.n;
  const double dt = grid.dt;
  const LagTable table = tabulate(kernel, dt, n);

  // Q01 from the free field alone (no distributed forcing in this closure).
  std::vector<double> big_q01(n);
  for (std::size_t k = 0; k < n; ++k)
    big_q01[k] = free_field(cfg, init, grid.time(k), cfg.x0);

  Trajectory traj;
  traj.grid = grid;
  traj.q.resize(n);
  traj.big_q.resize(n);
  traj.qdot.resize(n);

  std::vector<double> accel(n, 0.0), u_hist(n, 0.0);
  traj.q[0] = init.q_init;
  traj.qdot[0] = init.qdot_init;
  traj.big_q[0] = big_q01[0];
  accel[0] = f_pf(traj.q[0], traj.big_q[0], grid.s) / mass;
  u_hist[0] = u0_interaction(grid.s, traj.big_q[0], traj.q[0]);

  double prefix_u = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    const double t = grid.time(j);
    prefix_u += (j == 1 ? 0.5 * dt : dt) * u_hist[j - 1];
    const double mem_known = memory_sum(table, u_hist, j, dt, prefix_u);
    const double predictor =
        traj.q[j - 1] + dt * traj.qdot[j - 1] + dt * dt / 3.0 * accel[j - 1];
    const double diag_w = 0.5 * dt * table.kappa[0];

    // Current-step unknown: Q_j. q_j follows from the inner acceleration
    // relation; both enter the scalar residual solved by Newton.
    auto q_of = [&](double big_q) {
      // q = predictor + dt^2/6 f_pf(q, Q, t)/mass, itself solved by Newton.
      double q = predictor + dt * dt / 6.0 * accel[j - 1];
      for (int it = 0; it < 50; ++it) {
        const double g = q - predictor - dt * dt / 6.0 * f_pf(q, big_q, t) / mass;
        if (std::abs(g) < 1e-14 * std::max(1.0, std::abs(q))) return q;
        const double eps = 1e-7 * std::max(1.0, std::abs(q));
        const double gp =
            (q + eps - predictor - dt * dt / 6.0 * f_pf(q + eps, big_q, t) / mass - g) /
            eps;
        if (gp == 0.0) break;
        q -= g / gp;
      }
      return q;
    };
    auto residual = [&](double big_q) {
      return big_q - big_q01[j] + mem_known +
             diag_w * u0_interaction(t, big_q, q_of(big_q));
    };

    double big_q = traj.big_q[j - 1];
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const double r = residual(big_q);
      if (std::abs(r) < 1e-12 * std::max(1.0, std::abs(big_q))) {
        converged = true;
        break;
      }
      const double eps = 1e-7 * std::max(1.0, std::abs(big_q));
      const double drdq = (residual(big_q + eps) - r) / eps;
      if (drdq == 0.0) break;
      big_q -= r / drdq;
    }
    if (!converged)
      throw SolverError("general_closure: Newton failed to converge at t = " +
                        std::to_string(t) + " after 50 iterations");

    const double q = q_of(big_q);
    traj.big_q[j] = big_q;
    traj.q[j] = q;
    accel[j] = f_pf(q, big_q, t) / mass;
    traj.qdot[j] = traj.qdot[j - 1] + 0.5 * dt * (accel[j - 1] + accel[j]);
    u_hist[j] = u0_interaction(t, big_q, q);
  }
  return traj;
}

double volterra_residual_max(const MemoryKernel& kernel, const Trajectory& traj,
                             const std::vector<double>& q01_samples,
                             const InteractionFunc& u0_interaction,
                             std::size_t stride) {
  const TimeGrid& grid = traj.grid;
  if (q01_samples.size() != grid.n)
    throw ConfigError("volterra_residual_max: sample size mismatch");
  if (stride == 0) stride = 1;
  std::vector<double> u_hist(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i)
    u_hist[i] = u0_interaction(grid.time(i), traj.big_q[i], traj.q[i]);

  double worst = 0.0;
  std::vector<double> integrand;
  for (std::size_t j = 0; j < grid.n; j += stride) {
    integrand.resize(j + 1);
    const double tj = grid.time(j);
    for (std::size_t i = 0; i <= j; ++i) {
      const double k = i == j ? kernel.zero_lag : kernel.eval(tj, grid.time(i));
      integrand[i] = k * u_hist[i];
    }
    const double r = traj.big_q[j] - q01_samples[j] + simpson(integrand, grid.dt);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace pointwave
