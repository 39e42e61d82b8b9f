#pragma once

#include <functional>

#include "pointwave/types.hpp"

namespace pointwave::quad {

/// Options for the adaptive characteristic-integral quadrature.
struct Options {
  double abs_tol = 1e-10;     // absolute tolerance on the whole interval
  int max_intervals = 4000;   // subdivision budget before giving up
};

/// Adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Gauss-Kronrod 15-point panels, globally adaptive bisection of the panel
/// with the largest error estimate until the summed estimate meets abs_tol.
/// Throws QuadratureError carrying the worst panel when the budget runs out.
/// a == b returns exactly 0; a > b flips the sign.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts = {});

}  // namespace pointwave::quad
