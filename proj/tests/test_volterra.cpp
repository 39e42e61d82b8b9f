#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pointwave/closed_form.hpp"
#include "pointwave/quadrature.hpp"
#include "pointwave/reduced_ode.hpp"
#include "pointwave/volterra.hpp"

using namespace pointwave;

namespace {

FieldConfig cfg_with_c(double c) {
  FieldConfig cfg;
  cfg.c = c;
  cfg.x0 = 0.0;
  cfg.s = 0.0;
  cfg.x_min = -10.0;
  cfg.x_max = 10.0;
  return cfg;
}

double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("mollifiers: unit mass and primitive consistency") {
  for (const Mollifier& m :
       {Mollifier::gaussian(0.13), Mollifier::bump(0.27)}) {
    // Total mass 1: primitive saturates from 0 to 1.
    CHECK(m.primitive(-10.0 * m.width) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.primitive(10.0 * m.width) == doctest::Approx(1.0).epsilon(1e-12));
    // d(primitive)/dx = shape, central differences well inside the support.
    for (double y : {-0.4 * m.width, 0.0, 0.7 * m.width}) {
      const double h = 1e-6 * m.width;
      const double slope = (m.primitive(y + h) - m.primitive(y - h)) / (2.0 * h);
      CHECK(slope == doctest::Approx(m.shape(y)).epsilon(1e-6));
    }
    // Mass by quadrature as an independent check.
    const double mass =
        quad::integrate(m.shape, -8.0 * m.width, 8.0 * m.width, {1e-12, 4000});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("kernel: Dirac limit and zero-lag values") {
  const double c = 1.7;
  const MemoryKernel dirac = build_kernel(cfg_with_c(c), Mollifier::step());
  for (double lag : {1e-6, 0.3, 2.0, 50.0})
    CHECK(dirac.at_lag(lag) == 0.5 / c);
  CHECK(dirac.zero_lag == 0.5 / c);

  // Smooth even mollifier: zero lag gives an odd difference, exactly 0.
  const MemoryKernel smooth = build_kernel(cfg_with_c(c), Mollifier::gaussian(0.1));
  CHECK(smooth.at_lag(0.0) == 0.0);
  CHECK(smooth.zero_lag == 0.0);
  CHECK(smooth.eval(4.2, 4.2) == 0.0);
}

TEST_CASE("kernel: gaussian values against the erf closed form") {
  // K0(lag) = erf(c lag / (sigma sqrt(2))) / (2c), sigma = width/3;
  // frozen 30-digit values.
  const MemoryKernel k1 = build_kernel(cfg_with_c(1.0), Mollifier::gaussian(0.1));
  CHECK(k1.at_lag(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(k1.at_lag(0.1) == doctest::Approx(0.49865010196836991).epsilon(1e-14));
  const MemoryKernel k2 = build_kernel(cfg_with_c(1.0), Mollifier::gaussian(0.2));
  CHECK(k2.at_lag(0.05) == doctest::Approx(0.27337264762313180).epsilon(1e-13));
}

TEST_CASE("kernel: primitive offset invariance") {
  const FieldConfig cfg = cfg_with_c(2.0);
  Mollifier m = Mollifier::gaussian(0.15);
  Mollifier shifted = m;
  const Profile base = m.primitive;
  shifted.primitive = [base](double y) { return base(y) + 3.25; };
  const MemoryKernel a = build_kernel(cfg, m);
  const MemoryKernel b = build_kernel(cfg, shifted);
  for (double lag : {0.0, 0.01, 0.2, 1.0})
    CHECK(a.at_lag(lag) == doctest::Approx(b.at_lag(lag)).epsilon(1e-15));
}

TEST_CASE("kernel: saturates to 1/(2c) once the mollifier is fully crossed") {
  const double c = 1.3;
  const FieldConfig cfg = cfg_with_c(c);
  const double alpha = 0.2;
  // Compact support: exact equality the moment c lag > alpha.
  const MemoryKernel bump = build_kernel(cfg, Mollifier::bump(alpha));
  for (double lag : {alpha / c * 1.01, 0.5, 3.0})
    CHECK(bump.at_lag(lag) == 0.5 / c);
  // Gaussian: saturated to double precision beyond a few widths.
  const MemoryKernel gauss = build_kernel(cfg, Mollifier::gaussian(alpha));
  CHECK(gauss.at_lag(3.0 * alpha / c) == 0.5 / c);
}

TEST_CASE("solve_q_nonlocal: zero coupling is the plain oscillator") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.2, 0.0};
  const MemoryKernel kernel = build_kernel(cfg, Mollifier::gaussian(0.1));
  Forcing forcing;
  forcing.f0 = [](double t) { return 0.3 * std::sin(0.7 * t); };
  InitialData init;
  init.q_init = 0.5;
  init.qdot_init = -0.1;
  const TimeGrid grid(0.0, 10.0, 1e-3);
  const Trajectory traj =
      solve_q_nonlocal(cfg, p, kernel, {}, forcing, init, grid);
  for (std::size_t i = 0; i < grid.n; i += 1000) {
    const double expected =
        damped_response(p, 0.5, -0.1, forcing.f0, grid.time(i), 0.0);
    CHECK(traj.q[i] == doctest::Approx(expected).epsilon(5e-6));
  }
}

TEST_CASE("solve_q_nonlocal: Dirac kernel reproduces the local first model") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.0, 0.1};
  const MemoryKernel kernel = build_kernel(cfg, Mollifier::step());
  InitialData init;
  init.q_init = 1.0;
  const TimeGrid grid(0.0, 20.0, 1e-3);
  const Trajectory traj =
      solve_q_nonlocal(cfg, p, kernel, {}, Forcing{}, init, grid);

  const ReducedSystem sys =
      ReducedSystem::first_model(p, cfg, InitialData::rest(), Forcing{});
  const Trajectory local = integrate_first_model(sys, init, grid);
  CHECK(sup_gap(traj.q, local.q) < 1e-6);
  CHECK(sup_gap(traj.big_q, local.big_q) < 1e-6);

  const HomogeneousSolution exact = homogeneous_solution(p, 1.0, 0.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i)
    worst = std::max(worst, std::abs(traj.q[i] - exact.q(grid.time(i))));
  CHECK(worst < 1e-6);
}

TEST_CASE("solve_q_nonlocal: width sequence converges to the local model") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.0, 0.1};
  InitialData init;
  init.q_init = 1.0;
  const TimeGrid grid(0.0, 20.0, 2e-3);
  const ReducedSystem sys =
      ReducedSystem::first_model(p, cfg, InitialData::rest(), Forcing{});
  const Trajectory local = integrate_first_model(sys, init, grid);

  double previous = std::numeric_limits<double>::infinity();
  for (double width : {0.2, 0.1, 0.05}) {
    const MemoryKernel kernel = build_kernel(cfg, Mollifier::gaussian(width));
    const Trajectory traj =
        solve_q_nonlocal(cfg, p, kernel, {}, Forcing{}, init, grid);
    const double gap = sup_gap(traj.q, local.q);
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous < 5e-3);
}

TEST_CASE("solve_q_nonlocal: driven run keeps the forcing memory term") {
  // gamma_c K0 f0 enters the right-hand side; cross-check against the
  // general closure with the same interaction.
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.0, 0.3};
  const MemoryKernel kernel = build_kernel(cfg, Mollifier::gaussian(0.15));
  Forcing forcing;
  forcing.f0 = [](double t) { return 0.4 * std::cos(0.9 * t); };
  InitialData init;
  init.q_init = 0.2;
  const TimeGrid grid(0.0, 6.0, 1e-3);
  const Trajectory a =
      solve_q_nonlocal(cfg, p, kernel, {}, forcing, init, grid);

  const double gc = p.gamma * cfg.c;
  const double omega2 = p.omega * p.omega;
  const Trajectory b = general_closure(
      cfg, kernel,
      [gc](double, double big_q, double q) { return 4.0 * gc * (big_q - q); },
      [&](double q, double big_q, double t) {
        return -omega2 * (q - big_q) + forcing.f0(t);
      },
      init, grid);
  CHECK(sup_gap(a.q, b.q) < 1e-4);
  CHECK(sup_gap(a.big_q, b.big_q) < 1e-4);
}

TEST_CASE("general_closure: zero interaction leaves Q = Q01") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const MemoryKernel kernel = build_kernel(cfg, Mollifier::gaussian(0.1));
  InitialData init;
  init.u_init = [](double x) { return std::exp(-x * x); };
  init.q_init = 0.7;
  const TimeGrid grid(0.0, 3.0, 1e-3);
  const Trajectory traj = general_closure(
      cfg, kernel, [](double, double, double) { return 0.0; },
      [](double q, double, double) { return -q; }, init, grid);
  for (std::size_t i = 0; i < grid.n; i += 300) {
    const double q01 = free_field(cfg, init, grid.time(i), cfg.x0);
    CHECK(traj.big_q[i] == doctest::Approx(q01).epsilon(1e-12));
  }
}

TEST_CASE("general_closure: cubic interaction satisfies the Volterra identity") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.0, 0.2};
  const double gc = p.gamma * cfg.c;
  const MemoryKernel kernel = build_kernel(cfg, Mollifier::gaussian(0.1));
  InitialData init;
  init.q_init = 0.8;
  const TimeGrid grid(0.0, 2.0, 1e-4);
  const InteractionFunc u0 = [gc](double, double big_q, double q) {
    const double d = big_q - q;
    return 4.0 * gc * d * d * d;
  };
  const Trajectory traj = general_closure(
      cfg, kernel, u0,
      [&](double q, double big_q, double) {
        return -p.omega * p.omega * (q - big_q);
      },
      init, grid);

  std::vector<double> q01(grid.n, 0.0);  // field starts at rest
  CHECK(volterra_residual_max(kernel, traj, q01, u0, 7) < 1e-8);
}

TEST_CASE("volterra residual of the linear solver trajectory") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.0, 0.25};
  const double gc = p.gamma * cfg.c;
  const MemoryKernel kernel = build_kernel(cfg, Mollifier::gaussian(0.2));
  InitialData init;
  init.q_init = 1.0;
  init.qdot_init = 0.3;
  const TimeGrid grid(0.0, 2.0, 1e-4);
  const Trajectory traj =
      solve_q_nonlocal(cfg, p, kernel, {}, Forcing{}, init, grid);
  std::vector<double> q01(grid.n, 0.0);
  CHECK(volterra_residual_max(
            kernel, traj, q01,
            [gc](double, double big_q, double q) {
              return 4.0 * gc * (big_q - q);
            },
            7) < 1e-8);
}

TEST_CASE("general_closure: Newton divergence raises a step failure") {
  const FieldConfig cfg = cfg_with_c(1.0);
  MemoryKernel kernel = build_kernel(cfg, Mollifier::step());
  InitialData init;
  init.q_init = 1.0;
  const TimeGrid grid(0.0, 1.0, 0.05);
  // An interaction whose residual has no root: R(Q) jumps by sign(Q) with
  // a large magnitude, so Newton can never settle.
  const InteractionFunc hostile = [](double, double big_q, double) {
    return big_q > 0.0 ? 1e12 : -1e12;
  };
  CHECK_THROWS_AS(general_closure(cfg, kernel, hostile,
                                  [](double q, double, double) { return -q; },
                                  init, grid),
                  SolverError);
}

TEST_CASE("solve_q_nonlocal: ill-conditioned diagonal pivot is reported") {
  const FieldConfig cfg = cfg_with_c(1.0);
  const OscillatorParams p{1.0, 0.5};
  const TimeGrid grid(0.0, 1.0, 0.1);
  // Synthetic stationary kernel whose zero-lag value makes
  // 1 + 4 gamma_c dt K0(t,t)/2 vanish.
  MemoryKernel kernel;
  kernel.c = cfg.c;
  kernel.zero_lag = -1.0 / (4.0 * p.gamma * cfg.c * grid.dt * 0.5);
  kernel.saturation_value = 0.5;
  kernel.saturation_lag = 0.0;
  kernel.eval = [&](double t, double tau) {
    return t == tau ? kernel.zero_lag : 0.5;
  };
  CHECK_THROWS_AS(
      solve_q_nonlocal(cfg, p, kernel, {}, Forcing{}, InitialData{}, grid),
      SolverError);
}
