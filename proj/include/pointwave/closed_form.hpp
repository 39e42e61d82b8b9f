#pragma once

#include <utility>

#include "pointwave/quadrature.hpp"
#include "pointwave/types.hpp"

namespace pointwave {

// Explicit analytic solutions: the damped-oscillator propagator, the
// homogeneous radiation-reaction solutions for q, Q, u, the steady-state
// resonance response and its phase, and the total-reflection asymptotics.

enum class DampingBranch { underdamped, critical, overdamped };

inline DampingBranch damping_branch(const OscillatorParams& p) {
  const double w2 = p.omega_gamma_sq();
  if (w2 > 0.0) return DampingBranch::underdamped;
  if (w2 < 0.0) return DampingBranch::overdamped;
  return DampingBranch::critical;
}

/// Entries of the 2x2 propagator of x'' + 2 gamma x' + Omega^2 x = 0,
/// acting on (x, x').
struct PropagatorEntries {
  double v11, v12, v21, v22;
};

/// Propagator entries at elapsed time t - s. All damping branches: the
/// trigonometric form continues through sin(w tau)/w -> tau at w = 0 and
/// into sinh/w for gamma > Omega.
PropagatorEntries propagator_components(const OscillatorParams& params,
                                        double t, double s);

/// Response formula: y(t) from y(s), y'(s) and the driving term f, the
/// convolution integral evaluated by adaptive quadrature.
double damped_response(const OscillatorParams& params, double y_init,
                       double ydot_init, const TimeFunc& f, double t, double s,
                       const quad::Options& q = {});

/// Homogeneous (no external force, field initially at rest) solution of the
/// coupled system in the c = 1, s = 0, x0 = 0 normalization. Evaluates
/// q(t), Q(t), qdot(t) and the retarded field u(t,x) in closed form.
///
/// The coupling enforces Q(0) = 0 and Qdot(0) = 2 gamma q(0); the oscillator
/// settles at q_inf = (2 gamma / Omega^2) qdot(0).
class HomogeneousSolution {
 public:
  HomogeneousSolution(const OscillatorParams& params, double q_init,
                      double qdot_init);

  double q(double t) const;
  double qdot(double t) const;
  double big_q(double t) const;
  /// Retarded field: Q(t - |x|) inside the cone t >= |x|, 0 outside.
  double u(double t, double x) const;

  /// Stationary value (2 gamma / Omega^2) qdot(0).
  double q_limit() const { return limit_; }

  Trajectory sample(const TimeGrid& grid) const;

 private:
  OscillatorParams params_;
  double q0_, v0_, limit_;
};

inline HomogeneousSolution homogeneous_solution(const OscillatorParams& params,
                                                double q_init, double qdot_init) {
  return HomogeneousSolution(params, q_init, qdot_init);
}

/// Harmonic response coefficients: a_s sin(kt) + a_c cos(kt) solving
/// y'' + 2 gamma y' + Omega^2 y = A_s sin(kt) + A_c cos(kt).
/// Throws ResonanceSingularityError when the denominator
/// (Omega^2-k^2)^2 + (2 gamma k)^2 degenerates (gamma = 0, k = Omega).
std::pair<double, double> harmonic_particular(const OscillatorParams& params,
                                              double k, double a_s_rhs,
                                              double a_c_rhs);

/// Steady harmonic response: coefficients, amplitude and phase offset.
struct SteadyState {
  double a_s = 0.0;  // sin(kt) coefficient
  double a_c = 0.0;  // cos(kt) coefficient
  double amplitude = 0.0;
  double phi_k = 0.0;   // phase offset, q ~ amplitude * sin(kt + phi_k)
  double cos_phi = 1.0;
  double sin_phi = 0.0;
};

/// Long-time response to an incident wave A sin(k(x + ct)):
///   first  = harmonic part of q(t)
///   second = harmonic part of Q(t) - A sin(kt)
std::pair<SteadyState, SteadyState> steady_state(const OscillatorParams& params,
                                                 double k, double A);

/// Total-reflection asymptotic field for k = Omega, qdot(0) = 0, gamma*t >> 1
/// (c = 1, x0 = 0 normalization): quiet zone behind the oscillator, standing
/// wave in front, unperturbed incident wave outside the cone.
double reflection_profile(const OscillatorParams& params, double k, double A,
                          double t, double x);

}  // namespace pointwave
