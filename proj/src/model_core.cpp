#include "pointwave/model_core.hpp"

#include <cmath>

namespace pointwave {

double free_field(const FieldConfig& cfg, const InitialData& init, double t,
                  double x, const quad::Options& q) {
  const double reach = cfg.c * (t - cfg.s);
  const double xp = x + reach;
  const double xm = x - reach;

  double value = 0.5 * (eval_or_zero(init.u_init, xp) + eval_or_zero(init.u_init, xm));
  if (init.udot_primitive) {
    value += (init.udot_primitive(xp) - init.udot_primitive(xm)) / (2.0 * cfg.c);
  } else if (init.udot_init) {
    value += quad::integrate(init.udot_init, xm, xp, q) / (2.0 * cfg.c);
  }
  return value;
}

double forced_field_contribution(const FieldConfig& cfg, const Forcing& forcing,
                                 double t, double x, const quad::Options& q) {
  if (!forcing.has_f1() && !forcing.f1_primitive) return 0.0;
  if (t == cfg.s) return 0.0;

  // Any antiderivative works; when none is supplied, anchor at x0. The
  // anchor cancels in the difference below.
  SpaceTimeFunc primitive = forcing.f1_primitive;
  if (!primitive) {
    const double anchor = cfg.x0;
    const SpaceTimeFunc f1 = forcing.f1;
    const quad::Options inner = q;
    primitive = [f1, anchor, inner](double tau, double xi) {
      return quad::integrate([&](double y) { return f1(tau, y); }, anchor, xi,
                             inner);
    };
  }

  const double c = cfg.c;
  auto integrand = [&](double tau) {
    const double reach = c * (t - tau);
    return primitive(tau, x + reach) - primitive(tau, x - reach);
  };
  return quad::integrate(integrand, cfg.s, t, q) / (2.0 * c);
}

double u01(const FieldConfig& cfg, const InitialData& init,
           const Forcing& forcing, double t, double x, const quad::Options& q) {
  return free_field(cfg, init, t, x, q) +
         forced_field_contribution(cfg, forcing, t, x, q);
}

std::vector<double> q01_series(const FieldConfig& cfg, const InitialData& init,
                               const Forcing& forcing, const TimeGrid& grid,
                               const quad::Options& q) {
  if (std::abs(grid.s - cfg.s) > 1e-12 * std::max(1.0, std::abs(cfg.s)))
    throw ConfigError("q01_series: grid start must equal the field start time");
  std::vector<double> samples(grid.n);
  for (std::size_t k = 0; k < grid.n; ++k)
    samples[k] = u01(cfg, init, forcing, grid.time(k), cfg.x0, q);
  return samples;
}

TimeFunc make_q01(const FieldConfig& cfg, const InitialData& init,
                  const Forcing& forcing, const quad::Options& q) {
  return [cfg, init, forcing, q](double t) {
    return u01(cfg, init, forcing, t, cfg.x0, q);
  };
}

}  // namespace pointwave
