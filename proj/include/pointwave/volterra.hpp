#pragma once

#include <limits>

#include "pointwave/model_core.hpp"
#include "pointwave/types.hpp"

namespace pointwave {

// Generalized non-local model: the point coupling smeared by a mollifier
// delta_alpha, the memory kernel K0 it induces, the Volterra second-kind
// equation for Q and the insulated integro-differential equation for q.
// The local model of the first sections is the sharp-mollifier limit.

/// Unit-mass mollifier centered at the coupling offset 0. The primitive is
/// any antiderivative of the shape; kernel values only ever use primitive
/// differences, so the additive constant is irrelevant.
///
/// The width parameter is the effective support radius for every family:
/// the bump vanishes outside [-alpha, alpha] exactly, the Gaussian keeps
/// 99.7% of its mass there (standard deviation alpha/3).
struct Mollifier {
  Profile shape;      // y -> delta_alpha(y), >= 0
  Profile primitive;  // y -> antiderivative of shape
  double width = 0.0; // effective support radius alpha
  double saturation_radius = 0.0;  // primitive flat (in double) beyond this

  /// Gaussian with standard deviation alpha/3.
  static Mollifier gaussian(double alpha);
  /// Compactly supported smooth bump on [-alpha, alpha].
  static Mollifier bump(double alpha);
  /// Sharp (Dirac) limit: the primitive is the unit step, taken 0 at 0.
  static Mollifier step();
};

/// Stationary memory kernel K0(t,tau) = (P(c(t-tau)) - P(c(tau-t))) / (2c)
/// with P the mollifier primitive. For unit-mass mollifiers the kernel
/// saturates to 1/(2c) once the mollifier is fully crossed.
struct MemoryKernel {
  std::function<double(double, double)> eval;  // (t, tau)
  bool stationary = true;
  double c = 1.0;
  /// Causal zero-lag value lim_{tau -> t^-} K0(t,tau). Zero for smooth
  /// mollifiers; 1/(2c) in the Dirac limit, which makes the product
  /// integration of the q-acceleration telescope exactly.
  double zero_lag = 0.0;
  double saturation_value = 0.0;  // 1/(2c) for unit mass
  double saturation_lag = std::numeric_limits<double>::infinity();

  double at_lag(double lag) const { return eval(lag, 0.0); }
};

MemoryKernel build_kernel(const FieldConfig& cfg, const Mollifier& m);

/// Non-local first model. At every grid node the acceleration a = q'' solves
/// the Volterra second-kind equation
///   a(t) + 4 gamma_c int_s^t K0(t,tau) a(tau) dtau = RHS(t)
/// by trapezoidal product integration with the diagonal entry handled
/// implicitly; q and qdot advance by the matching linear-acceleration
/// update, and Q is recovered from its own Volterra equation
///   Q = Q01 - 4 gamma_c K0_hat (Q - q).
/// gamma_c = gamma * c.
Trajectory solve_q_nonlocal(const FieldConfig& cfg, const OscillatorParams& params,
                            const MemoryKernel& kernel, const TimeFunc& q01,
                            const Forcing& forcing, const InitialData& init,
                            const TimeGrid& grid);

using InteractionFunc = std::function<double(double, double, double)>;  // (t,Q,q)
using PointForce = std::function<double(double, double, double)>;       // (q,Q,t)

/// Arbitrary scalar interaction U0(t,Q,q) and point force F_pf(q,Q,t):
///   Q(t) = Q01(t) - int_s^t K0(t,tau) U0(tau,Q,q) dtau
///   M q'' = F_pf(q,Q,t)
/// solved per step by product integration plus Newton iteration on the
/// current-step unknowns (50-iteration cap). Q01 is built from cfg/init.
Trajectory general_closure(const FieldConfig& cfg, const MemoryKernel& kernel,
                           const InteractionFunc& u0_interaction,
                           const PointForce& f_pf, const InitialData& init,
                           const TimeGrid& grid, double mass = 1.0);

/// Independent re-evaluation of the Volterra identity
///   Q - Q01 + int K0 U0 = 0
/// on a computed trajectory, composite-Simpson quadrature on the sampled
/// integrand. Returns the max absolute residual over the checked nodes
/// (every `stride`-th node; the full grid costs O(n^2) kernel evaluations).
double volterra_residual_max(const MemoryKernel& kernel, const Trajectory& traj,
                             const std::vector<double>& q01_samples,
                             const InteractionFunc& u0_interaction,
                             std::size_t stride = 1);

}  // namespace pointwave
