#pragma once

#include "pointwave/reduced_ode.hpp"
#include "pointwave/types.hpp"

namespace pointwave {

// Brute-force oracle: the coupled oscillator + wave system integrated
// directly on a space-time grid, with the point coupling discretized. Used
// to cross-check every reduced formulation.

enum class SourceModel { nearest_node, characteristics_exact };

/// Discretization controls. Either dt or courant may be given; the other is
/// derived from c dt / dx = courant. nearest_node runs at any courant <= 1,
/// characteristics_exact requires courant = 1 (exact transport stencil).
struct GridScheme {
  double dx = 1e-2;
  double dt = 0.0;       // 0: derive from courant
  double courant = 1.0;  // c dt / dx
  SourceModel source_model = SourceModel::characteristics_exact;
  std::size_t snapshot_stride = 0;  // 0: keep only first and final frame
  // Extra snapshots at the steps nearest these times (for exact-time output
  // without storing every step).
  std::vector<double> snapshot_times;
};

struct CoupledRun {
  Trajectory trajectory;          // q, Q = u(t, x0), qdot at integer steps
  std::vector<FieldFrame> frames; // periodic snapshots, always incl. first/last
};

/// Leapfrog integration of the coupled system on [x_min, x_max] until t_end.
///
/// The grid is laid so x0 falls exactly on a node. The delta is realized as
/// 1/dx at that node (nearest_node) or as the exact characteristic-diamond
/// source at courant 1 (characteristics_exact). The oscillator is co-stepped
/// by a staggered velocity-Verlet update that reads Q(t) = u(t,x0) off the
/// grid before each kick. Domain edges carry outgoing-characteristic
/// (absorbing) updates and must be causally disconnected from x0 for the
/// whole run: |edge - x0| > c (t_end - s) is enforced.
CoupledRun run_coupled(const FieldConfig& cfg, const OscillatorParams& params,
                       const InitialData& init, const Forcing& forcing,
                       const GridScheme& scheme, double t_end,
                       ModelKind model = ModelKind::first);

/// Bilinear interpolation in (t, x) over stored frames.
double probe(const std::vector<FieldFrame>& frames, double t, double x);

}  // namespace pointwave
