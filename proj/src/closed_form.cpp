#include "pointwave/closed_form.hpp"

#include <cmath>

namespace pointwave {

namespace {

// sin(w tau)/w and cos(w tau) written in terms of w^2 so a single expression
// covers the trigonometric, critical and hyperbolic branches.
double scaled_sin(double w2, double tau) {
  const double z = w2 * tau * tau;
  if (std::abs(z) < 1e-10) {
    // sin(w t)/w = t (1 - z/6 + z^2/120 - ...), valid for either sign of z.
    return tau * (1.0 - z / 6.0 + z * z / 120.0);
  }
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    return std::sin(w * tau) / w;
  }
  const double mu = std::sqrt(-w2);
  return std::sinh(mu * tau) / mu;
}

double branch_cos(double w2, double tau) {
  const double z = w2 * tau * tau;
  if (std::abs(z) < 1e-10) return 1.0 - z / 2.0 + z * z / 24.0;
  if (w2 > 0.0) return std::cos(std::sqrt(w2) * tau);
  return std::cosh(std::sqrt(-w2) * tau);
}

}  // namespace

PropagatorEntries propagator_components(const OscillatorParams& params,
                                        double t, double s) {
  const double tau = t - s;
  const double w2 = params.omega_gamma_sq();
  const double e = std::exp(-params.gamma * tau);
  const double sn = scaled_sin(w2, tau);
  const double cs = branch_cos(w2, tau);
  PropagatorEntries v;
  v.v11 = e * (cs + params.gamma * sn);
  v.v12 = e * sn;
  v.v21 = -params.omega * params.omega * e * sn;
  v.v22 = e * (cs - params.gamma * sn);
  return v;
}

double damped_response(const OscillatorParams& params, double y_init,
                       double ydot_init, const TimeFunc& f, double t, double s,
                       const quad::Options& q) {
  const PropagatorEntries v = propagator_components(params, t, s);
  double y = v.v11 * y_init + v.v12 * ydot_init;
  if (f) {
    auto kernel = [&](double tau) {
      return propagator_components(params, t, tau).v12 * f(tau);
    };
    y += quad::integrate(kernel, s, t, q);
  }
  return y;
}

HomogeneousSolution::HomogeneousSolution(const OscillatorParams& params,
                                         double q_init, double qdot_init)
    : params_(params), q0_(q_init), v0_(qdot_init) {
  params_.validate();
  limit_ = 2.0 * params_.gamma / (params_.omega * params_.omega) * v0_;
}

double HomogeneousSolution::q(double t) const {
  const PropagatorEntries v = propagator_components(params_, t, 0.0);
  return v.v11 * (q0_ - limit_) + v.v12 * v0_ + limit_;
}

double HomogeneousSolution::qdot(double t) const {
  const PropagatorEntries v = propagator_components(params_, t, 0.0);
  return v.v21 * (q0_ - limit_) + v.v22 * v0_;
}

double HomogeneousSolution::big_q(double t) const {
  const PropagatorEntries v = propagator_components(params_, t, 0.0);
  return v.v11 * (-limit_) + v.v12 * (2.0 * params_.gamma * q0_) + limit_;
}

double HomogeneousSolution::u(double t, double x) const {
  const double retarded = t - std::abs(x);
  if (retarded < 0.0) return 0.0;
  return big_q(retarded);
}

Trajectory HomogeneousSolution::sample(const TimeGrid& grid) const {
  Trajectory traj;
  traj.grid = grid;
  traj.q.resize(grid.n);
  traj.big_q.resize(grid.n);
  traj.qdot.resize(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k) {
    const double t = grid.time(k);
    traj.q[k] = q(t);
    traj.big_q[k] = big_q(t);
    traj.qdot[k] = qdot(t);
  }
  return traj;
}

std::pair<double, double> harmonic_particular(const OscillatorParams& params,
                                              double k, double a_s_rhs,
                                              double a_c_rhs) {
  const double d = params.omega * params.omega - k * k;
  const double g2k = 2.0 * params.gamma * k;
  const double denom = d * d + g2k * g2k;
  if (denom < 1e-30)
    throw ResonanceSingularityError(
        "steady-state denominator degenerates at k = Omega with gamma = 0");
  return {(d * a_s_rhs + g2k * a_c_rhs) / denom,
          (-g2k * a_s_rhs + d * a_c_rhs) / denom};
}

std::pair<SteadyState, SteadyState> steady_state(const OscillatorParams& params,
                                                 double k, double A) {
  const double omega2 = params.omega * params.omega;
  const double d = omega2 - k * k;
  const double g2k = 2.0 * params.gamma * k;
  const double denom = d * d + g2k * g2k;
  if (denom < 1e-30)
    throw ResonanceSingularityError(
        "steady-state denominator degenerates at k = Omega with gamma = 0");
  const double root = std::sqrt(denom);

  SteadyState for_q;
  // q equation is driven by Omega^2 A sin(kt).
  const auto [qs, qc] = harmonic_particular(params, k, omega2 * A, 0.0);
  for_q.a_s = qs;
  for_q.a_c = qc;
  for_q.amplitude = std::abs(omega2 * A) / root;
  for_q.cos_phi = d / root;
  for_q.sin_phi = -g2k / root;
  for_q.phi_k = std::atan2(for_q.sin_phi, for_q.cos_phi);

  SteadyState for_big_q;
  // Q - A sin(kt) is driven by -2 gamma A k cos(kt).
  const double scale = -2.0 * params.gamma * A * k / denom;
  for_big_q.a_s = scale * g2k;
  for_big_q.a_c = scale * d;
  for_big_q.amplitude = std::abs(2.0 * params.gamma * A * k) / root;
  for_big_q.cos_phi = for_q.cos_phi;
  for_big_q.sin_phi = for_q.sin_phi;
  for_big_q.phi_k = for_q.phi_k;
  return {for_q, for_big_q};
}

double reflection_profile(const OscillatorParams& /*params*/, double k, double A,
                          double t, double x) {
  if (t - std::abs(x) >= 0.0) {
    if (x < 0.0) return 0.0;
    return 2.0 * A * std::sin(k * x) * std::cos(k * t);
  }
  if (t >= 0.0) return A * std::sin(k * (x + t));
  // Before the start of the interaction the incident wave fills the line.
  return A * std::sin(k * (x + t));
}

}  // namespace pointwave
