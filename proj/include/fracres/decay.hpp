#pragma once

// Norm time series with anchored power-law references and local decay exponents.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracres/error.hpp"

namespace fracres {

struct DecayRow {
  double t = 0.0;
  double norm = 0.0;
  double bound_alpha_gamma = 0.0;  // C t^{-alpha gamma}
  double bound_gamma = 0.0;        // C' t^{-gamma}
  std::optional<double> local_exponent;
};

struct DecayTable {
  std::vector<DecayRow> rows;
  double alpha = 0.0;
  double gamma = 0.0;
};

inline constexpr double kAnchorSafety = 1.05;

/// C t^{-p} through the first sample scaled by the safety factor.
inline double anchored_reference(double t0, double norm0, double p, double t) {
  return kAnchorSafety * norm0 * std::pow(t / t0, -p);
}

/// Fills the exponent column: -(log n_{i+1} - log n_{i-1}) / (log t_{i+1} - log t_{i-1})
/// on interior rows; missing where a neighbouring norm is not positive.
inline void local_exponent(DecayTable& table) {
  auto& r = table.rows;
  if (r.size() < 3) throw ConfigError("diagnostics_cli", "local exponents need at least 3 rows");
  for (auto& row : r) row.local_exponent.reset();
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double a = r[i - 1].norm, b = r[i + 1].norm;
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) continue;
    r[i].local_exponent = -(std::log(b) - std::log(a)) / (std::log(r[i + 1].t) - std::log(r[i - 1].t));
  }
}

inline DecayTable make_decay_table(std::span<const double> times, std::span<const double> norms, double alpha,
                                   double gamma) {
  if (times.empty() || times.size() != norms.size())
    throw ConfigError("diagnostics_cli", "decay table needs matching, non-empty time and norm series");
  DecayTable tab;
  tab.alpha = alpha;
  tab.gamma = gamma;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0 && !(times[i] > times[i - 1]))
      throw ConfigError("diagnostics_cli", "decay table times must be strictly increasing");
    if (!std::isfinite(norms[i]) || norms[i] < 0.0)
      throw NumericalError("diagnostics_cli", "norm at t=" + std::to_string(times[i]) + " is not finite");
    DecayRow row;
    row.t = times[i];
    row.norm = norms[i];
    row.bound_alpha_gamma = anchored_reference(times[0], norms[0], alpha * gamma, times[i]);
    row.bound_gamma = anchored_reference(times[0], norms[0], gamma, times[i]);
    tab.rows.push_back(row);
  }
  if (tab.rows.size() >= 3) local_exponent(tab);
  return tab;
}

/// Every norm lies on or below the anchored t^{-alpha gamma} reference.
inline bool bound_satisfied(const DecayTable& table) {
  for (const auto& row : table.rows)
    if (!(row.norm <= row.bound_alpha_gamma)) return false;
  return !table.rows.empty();
}

/// max / min of t^{alpha gamma} norm over the table.
inline double scaled_variation(const DecayTable& table) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& row : table.rows) {
    const double v = std::pow(row.t, table.alpha * table.gamma) * row.norm;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

}  // namespace fracres
