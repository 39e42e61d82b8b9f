#pragma once

#include "pointwave/quadrature.hpp"
#include "pointwave/types.hpp"

namespace pointwave {

// Free evolution and forcing contribution of the 1D wave field, evaluated by
// the method of characteristics. These are the building blocks every solver
// consumes: u0 is the two-traveling-waves form of the initial data, and the
// forcing contribution is the double characteristic integral of the
// x-antiderivative of f1. Their sum is written u01 throughout.

/// u0(t,s,x): half-sum of the initial profile on the two characteristics plus
/// the velocity integral across their foot points. Time symmetric; t < s
/// evaluates the backward continuation.
double free_field(const FieldConfig& cfg, const InitialData& init, double t,
                  double x, const quad::Options& q = {});

/// The forcing term of u01 alone:
///   (1/2c) * int_s^t ( F1(tau, x + c(t-tau)) - F1(tau, x - c(t-tau)) ) dtau
/// with dF1/dx = f1. Uses forcing.f1_primitive when given, otherwise builds
/// the antiderivative by quadrature from x0. Returns 0 for empty f1.
double forced_field_contribution(const FieldConfig& cfg, const Forcing& forcing,
                                 double t, double x, const quad::Options& q = {});

/// u01(t,s,x) = free_field + forced_field_contribution.
double u01(const FieldConfig& cfg, const InitialData& init,
           const Forcing& forcing, double t, double x,
           const quad::Options& q = {});

/// Q01(t) = u01(t,s,x0) sampled on the grid. Requires grid.s == cfg.s.
std::vector<double> q01_series(const FieldConfig& cfg, const InitialData& init,
                               const Forcing& forcing, const TimeGrid& grid,
                               const quad::Options& q = {});

/// Callable t -> u01(t,s,x0). Copies cfg/init/forcing into the closure.
TimeFunc make_q01(const FieldConfig& cfg, const InitialData& init,
                  const Forcing& forcing, const quad::Options& q = {});

}  // namespace pointwave
