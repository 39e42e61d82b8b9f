#include "pointwave/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pointwave::quad {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b) {
  Panel p{a, b, 0.0, 0.0};
  // max_depth = 0: a single non-adaptive G7/K15 panel with its error estimate.
  p.value = GK15::integrate(f, a, b, 0, 0.0, &p.error);
  return p;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& opts) {
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, opts);

  std::priority_queue<Panel> panels;
  panels.push(evaluate(f, a, b));
  double total_error = panels.top().error;
  int used = 1;

  while (total_error > opts.abs_tol) {
    Panel worst = panels.top();
    if (used >= opts.max_intervals ||
        worst.b - worst.a <= 8.0 * std::numeric_limits<double>::epsilon() *
                                 std::max(std::abs(worst.a), std::abs(worst.b))) {
      throw QuadratureError("adaptive quadrature failed to converge (estimate " +
                                std::to_string(total_error) + " > tol " +
                                std::to_string(opts.abs_tol) + ")",
                            worst.a, worst.b);
    }
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate(f, worst.a, mid);
    Panel right = evaluate(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++used;
  }

  double sum = 0.0;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(used));
  while (!panels.empty()) {
    values.push_back(panels.top().value);
    panels.pop();
  }
  // Small-to-large summation keeps the result deterministic and tight.
  std::sort(values.begin(), values.end(),
            [](double x, double y) { return std::abs(x) < std::abs(y); });
  for (double v : values) sum += v;
  return sum;
}

}  // namespace pointwave::quad
