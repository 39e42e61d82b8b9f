#include "pointwave/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

namespace pointwave {

namespace {

// Natural cubic spline coefficients: on [x_i, x_{i+1}]
//   s(x) = y_i + b_i h + c_i h^2 + d_i h^3,  h = x - x_i.
struct SplineData {
  std::vector<double> x, y, b, c, d;
};

std::shared_ptr<SplineData> build_spline(std::vector<double> xs,
                                         std::vector<double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n)
    throw ConfigError("spline needs at least two matched (x, y) samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1]))
      throw ConfigError("spline abscissae must be strictly increasing");

  auto s = std::make_shared<SplineData>();
  s->x = std::move(xs);
  s->y = std::move(ys);
  s->b.assign(n, 0.0);
  s->c.assign(n, 0.0);
  s->d.assign(n, 0.0);
  if (n == 2) {
    s->b[0] = (s->y[1] - s->y[0]) / (s->x[1] - s->x[0]);
    return s;
  }

  // Tridiagonal solve for the second-derivative unknowns (natural ends).
  std::vector<double> h(n - 1), alpha(n, 0.0), l(n, 1.0), mu(n, 0.0), z(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = s->x[i + 1] - s->x[i];
  for (std::size_t i = 1; i + 1 < n; ++i)
    alpha[i] = 3.0 * ((s->y[i + 1] - s->y[i]) / h[i] -
                      (s->y[i] - s->y[i - 1]) / h[i - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    l[i] = 2.0 * (s->x[i + 1] - s->x[i - 1]) - h[i - 1] * mu[i - 1];
    mu[i] = h[i] / l[i];
    z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
  }
  for (std::size_t i = n - 1; i-- > 0;) {
    s->c[i] = z[i] - mu[i] * s->c[i + 1];
    s->b[i] = (s->y[i + 1] - s->y[i]) / h[i] - h[i] * (s->c[i + 1] + 2.0 * s->c[i]) / 3.0;
    s->d[i] = (s->c[i + 1] - s->c[i]) / (3.0 * h[i]);
  }
  return s;
}

std::size_t locate(const SplineData& s, double x) {
  std::size_t lo = 0, hi = s.x.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (s.x[mid] <= x ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

InitialData gaussian_pulse(double amp, double center, double width) {
  if (!(width > 0.0)) throw ConfigError("gaussian_pulse width must be > 0");
  InitialData init;
  init.u_init = [amp, center, width](double x) {
    const double z = (x - center) / width;
    return amp * std::exp(-0.5 * z * z);
  };
  init.udot_init = [](double) { return 0.0; };
  init.udot_primitive = [](double) { return 0.0; };
  return init;
}

InitialData incident_sine(double A, double k, const FieldConfig& cfg) {
  const double x0 = cfg.x0;
  const double c = cfg.c;
  InitialData init;
  init.u_init = [A, k, x0](double x) { return A * std::sin(k * (x - x0)); };
  init.udot_init = [A, k, c, x0](double x) {
    return A * k * c * std::cos(k * (x - x0));
  };
  init.udot_primitive = [A, k, c, x0](double x) {
    return A * c * std::sin(k * (x - x0));
  };
  return init;
}

Profile cubic_spline_profile(std::vector<double> xs, std::vector<double> ys) {
  auto s = build_spline(std::move(xs), std::move(ys));
  return [s](double x) {
    if (x < s->x.front() || x > s->x.back()) return 0.0;  // zero extension
    const std::size_t i = locate(*s, x);
    const double h = x - s->x[i];
    return s->y[i] + h * (s->b[i] + h * (s->c[i] + h * s->d[i]));
  };
}

Profile cubic_spline_antiderivative(std::vector<double> xs, std::vector<double> ys) {
  auto s = build_spline(std::move(xs), std::move(ys));
  // Cumulative integral at the knots; each segment integrates exactly.
  auto cum = std::make_shared<std::vector<double>>(s->x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < s->x.size(); ++i) {
    const double h = s->x[i + 1] - s->x[i];
    (*cum)[i + 1] = (*cum)[i] + h * (s->y[i] + h * (s->b[i] / 2.0 +
                                 h * (s->c[i] / 3.0 + h * s->d[i] / 4.0)));
  }
  return [s, cum](double x) {
    if (x <= s->x.front()) return 0.0;
    if (x >= s->x.back()) return cum->back();
    const std::size_t i = locate(*s, x);
    const double h = x - s->x[i];
    return (*cum)[i] + h * (s->y[i] + h * (s->b[i] / 2.0 +
                           h * (s->c[i] / 3.0 + h * s->d[i] / 4.0)));
  };
}

InitialData table_profile(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("cannot open profile table " + csv_path);
  std::vector<double> xs, ys;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, y;
    if (!(row >> x >> y)) {
      if (line_no == 1) continue;  // tolerate a header row
      throw ConfigError("profile table " + csv_path + ": bad row at line " +
                        std::to_string(line_no));
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  InitialData init;
  init.u_init = cubic_spline_profile(std::move(xs), std::move(ys));
  init.udot_init = [](double) { return 0.0; };
  init.udot_primitive = [](double) { return 0.0; };
  return init;
}

}  // namespace pointwave
