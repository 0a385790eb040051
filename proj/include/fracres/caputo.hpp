#pragma once

// Probe of the Caputo inversion integrand |s^(alpha-1) / (s^alpha + lambda)|
// along a ray, with the log-log slope at the small-|s| end.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracres/contour.hpp"
#include "fracres/error.hpp"
#include "fracres/kernels.hpp"

namespace fracres {

struct CaputoProbeRow {
  double abs_s = 0.0;
  double g = 0.0;
};

struct CaputoProbeResult {
  std::vector<CaputoProbeRow> rows;
  double slope = 0.0;  // least squares over the smallest two decades of radii
  std::size_t fit_points = 0;
  double alpha = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
};

inline std::vector<double> log_radii(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 2)
    throw ConfigError("diagnostics_cli", "log grid needs 0 < lo < hi and at least 2 points");
  std::vector<double> r(static_cast<std::size_t>(count));
  const double a = std::log10(lo), b = std::log10(hi);
  for (int k = 0; k < count; ++k) r[static_cast<std::size_t>(k)] = std::pow(10.0, a + (b - a) * k / (count - 1));
  return r;
}

inline CaputoProbeResult caputo_probe(double alpha, double lambda, double theta, std::span<const double> radii) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("diagnostics_cli", "alpha must lie in (0, 1)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("diagnostics_cli", "lambda must be finite and nonnegative");
  if (!(theta >= 0.0 && theta < pi)) throw ConfigError("diagnostics_cli", "theta must lie in [0, pi)");
  if (radii.size() < 3) throw ConfigError("diagnostics_cli", "probe needs at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw ConfigError("diagnostics_cli", "radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ConfigError("diagnostics_cli", "radii must increase");
  }
  if (!(radii.front() <= 1e-6 * (1.0 + 1e-12)))
    throw ConfigError("diagnostics_cli", "radii must span at least 6 decades below 1");

  const KernelParams cap = KernelParams::caputo_probe(alpha);
  CaputoProbeResult res;
  res.alpha = alpha;
  res.lambda = lambda;
  res.theta = theta;
  std::vector<double> fr, fg;
  const double fit_edge = radii.front() * 100.0 * (1.0 + 1e-12);
  for (double r : radii) {
    const cplx s = std::polar(r, theta);
    const double g = std::abs(eval_kernel(cap, s) / (principal_pow(s, alpha) + lambda));
    res.rows.push_back({r, g});
    if (r <= fit_edge) fr.push_back(r), fg.push_back(g);
  }
  if (fr.size() < 2) throw ConfigError("diagnostics_cli", "too few radii in the smallest two decades");
  res.slope = detail::loglog_slope(fr, fg);
  res.fit_points = fr.size();
  return res;
}

}  // namespace fracres
