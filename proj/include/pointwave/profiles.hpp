#pragma once

#include <string>
#include <vector>

#include "pointwave/types.hpp"

namespace pointwave {

// Built-in catalog of initial field profiles used by scenarios and tests.
// Each builder fills the profile callables of an InitialData, including the
// velocity antiderivative where it has a closed form (the d'Alembert
// formulas consume the antiderivative, not the velocity itself).

/// Gaussian displacement pulse amp * exp(-(x-center)^2 / (2 width^2)),
/// field initially at rest.
InitialData gaussian_pulse(double amp, double center, double width);

/// Left-moving incident wave A sin(k (x - x0) + k c (t - s)); at t = s the
/// displacement is A sin(k (x - x0)) and the velocity A k c cos(k (x - x0)).
/// Evaluated at the coupling point this produces Q01(t) = A sin(k c (t - s)).
InitialData incident_sine(double A, double k, const FieldConfig& cfg);

/// Natural cubic spline through (xs, ys), zero outside [xs.front(),
/// xs.back()]. The returned callable owns its coefficient tables.
Profile cubic_spline_profile(std::vector<double> xs, std::vector<double> ys);

/// Antiderivative of the spline above (exact per segment), anchored to 0 at
/// the left end of the support and constant beyond the right end.
Profile cubic_spline_antiderivative(std::vector<double> xs, std::vector<double> ys);

/// Displacement profile read from a two-column CSV (x,u), spline-wrapped
/// with zero extension; the file must list strictly increasing x.
InitialData table_profile(const std::string& csv_path);

}  // namespace pointwave
