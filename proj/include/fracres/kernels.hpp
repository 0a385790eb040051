#pragma once

// Laplace multipliers K(s) of the ABC and W derivatives, the Caputo symbol
// used by the failure probe, and an empirical admissibility check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fracres/contour.hpp"
#include "fracres/error.hpp"

namespace fracres {

enum class KernelKind { abc, w, caputo_probe };

inline const char* to_string(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::abc: return "abc";
    case KernelKind::w: return "w";
    case KernelKind::caputo_probe: return "caputo";
  }
  return "?";
}

struct KernelParams {
  KernelKind kind = KernelKind::abc;
  double alpha = 0.5;
  double beta = 1.0;  // W only
  double B = 1.0;     // normalization B(alpha) or B_{alpha,beta}

  static KernelParams abc(double alpha, double B = 1.0) {
    KernelParams p{KernelKind::abc, alpha, 1.0, B};
    p.validate();
    return p;
  }
  static KernelParams w(double alpha, double beta, double B = 1.0) {
    KernelParams p{KernelKind::w, alpha, beta, B};
    p.validate();
    return p;
  }
  static KernelParams caputo_probe(double alpha) {
    KernelParams p{KernelKind::caputo_probe, alpha, 1.0, 1.0};
    p.validate();
    return p;
  }

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw ConfigError("kernel_multipliers", "alpha=" + std::to_string(alpha) + " outside (0, 1)");
    if (!(B > 0.0) || !std::isfinite(B))
      throw ConfigError("kernel_multipliers", "normalization B must be positive");
    if (kind == KernelKind::w) {
      if (beta > 1.0)
        throw ConfigError("kernel_multipliers",
                          "beta=" + std::to_string(beta) +
                              " rejected: the W multiplier is only supported for 0 < beta <= 1; "
                              "admissibility may fail for beta > 1");
      if (!(beta > 0.0))
        throw ConfigError("kernel_multipliers", "beta=" + std::to_string(beta) + " outside (0, 1]");
    }
  }
};

/// K(s) on the principal branch.
///   ABC:    B/(1-a) * s^(a-1) / (s^a + a/(1-a))
///   W:      B * s^(a-1) / (1 + (1-a) s^(a-1))^b
///   Caputo: s^(a-1)
inline cplx eval_kernel(const KernelParams& p, cplx s) {
  if (on_branch_cut(s))
    throw DomainError("kernel_multipliers", "s lies on the branch cut (-inf, 0]");
  const double a = p.alpha;
  const cplx z = principal_pow(s, a - 1.0);
  switch (p.kind) {
    case KernelKind::abc: {
      const double c = a / (1.0 - a);
      return p.B / (1.0 - a) * z / (principal_pow(s, a) + c);
    }
    case KernelKind::w: {
      const cplx base = 1.0 + (1.0 - a) * z;
      if (std::abs(base) < 1e-300)
        throw NumericalError("kernel_multipliers", "vanishing W denominator");
      return p.B * z / principal_pow(base, p.beta);
    }
    case KernelKind::caputo_probe: return z;
  }
  return {};
}

struct AdmissibilityReport {
  double C0_hat = 0.0;    // max |K| over |s| <= 1
  double Cinf_hat = 0.0;  // max |K| / |s|^(a-1) over |s| >= 1
  double theta = 0.0;
  bool pass = false;
  cplx worst_s{};
  // least-squares log-log slopes over the outermost decades of the grid
  double small_s_exponent = 0.0;  // of |K| as |s| -> 0
  double large_s_exponent = 0.0;  // of |K| / |s|^(a-1) as |s| -> inf
  std::string diagnostic;
  std::size_t n_samples = 0;
  double r_lo = 1e-8;
  double r_hi = 1e8;
};

namespace detail {

inline double loglog_slope(std::span<const double> r, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double lx = std::log(r[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Samples |K| on both rays of angle theta over log-spaced radii in
/// [1e-8, 1e8] and checks the two envelopes of an admissible multiplier:
/// bounded for |s| <= 1 and O(|s|^(a-1)) for |s| >= 1. An envelope fails when
/// its ratio has a growth trend at the grid edge: the outermost decade holds
/// the maximum and its log-log slope exceeds 0.01 in magnitude toward the edge.
/// This is an empirical certificate on a finite grid, not a proof.
inline AdmissibilityReport estimate_admissibility(const KernelParams& p, double theta, int n_samples) {
  p.validate();
  if (!(theta > pi / 2.0 && theta < pi))
    throw ConfigError("kernel_multipliers", "theta must lie in (pi/2, pi)");
  if (n_samples < 64) throw ConfigError("kernel_multipliers", "n_samples must be at least 64");

  AdmissibilityReport rep;
  rep.theta = theta;
  rep.n_samples = static_cast<std::size_t>(n_samples);
  const double lo = std::log10(rep.r_lo);
  const double hi = std::log10(rep.r_hi);

  std::vector<double> radii(static_cast<std::size_t>(n_samples));
  for (std::size_t k = 0; k < radii.size(); ++k)
    radii[k] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(k) /
                                       static_cast<double>(radii.size() - 1));

  std::vector<double> small_r, small_v, large_r, large_v;
  double worst_ratio = -1.0;
  bool finite = true;
  for (double r : radii) {
    for (double sign : {1.0, -1.0}) {
      const cplx s = std::polar(r, sign * theta);
      const double mag = std::abs(eval_kernel(p, s));
      if (!std::isfinite(mag)) finite = false;
      const double env = r <= 1.0 ? 1.0 : std::pow(r, p.alpha - 1.0);
      const double ratio = mag / env;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        rep.worst_s = s;
      }
      if (r <= 1.0) rep.C0_hat = std::max(rep.C0_hat, mag);
      if (r >= 1.0) rep.Cinf_hat = std::max(rep.Cinf_hat, ratio);
      if (sign > 0.0) {
        if (r <= 1.0) small_r.push_back(r), small_v.push_back(mag);
        if (r >= 1.0) large_r.push_back(r), large_v.push_back(ratio);
      }
    }
  }

  // outermost decade on each side
  auto decade = [](const std::vector<double>& r, const std::vector<double>& v, bool low,
                   double edge, std::vector<double>& rr, std::vector<double>& vv) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      const bool inside = low ? r[i] <= edge * 10.0 * (1 + 1e-12) : r[i] >= edge / 10.0 * (1 - 1e-12);
      if (inside) rr.push_back(r[i]), vv.push_back(v[i]);
    }
  };
  std::vector<double> r0, v0, r1, v1;
  decade(small_r, small_v, true, rep.r_lo, r0, v0);
  decade(large_r, large_v, false, rep.r_hi, r1, v1);
  rep.small_s_exponent = detail::loglog_slope(r0, v0);
  rep.large_s_exponent = detail::loglog_slope(r1, v1);

  const double small_outer_max = *std::max_element(v0.begin(), v0.end());
  const double large_outer_max = *std::max_element(v1.begin(), v1.end());
  const bool small_growth =
      rep.small_s_exponent < -0.01 && small_outer_max >= rep.C0_hat * (1.0 - 1e-12);
  const bool large_growth =
      rep.large_s_exponent > 0.01 && large_outer_max >= rep.Cinf_hat * (1.0 - 1e-12);

  rep.pass = finite && std::isfinite(rep.C0_hat) && std::isfinite(rep.Cinf_hat) && !small_growth &&
             !large_growth;
  if (!finite) {
    rep.diagnostic = "not admissible: non-finite multiplier values on the grid";
  } else if (small_growth) {
    rep.diagnostic = "not admissible: |K(s)| unbounded as |s| -> 0 (log-log slope " +
                     std::to_string(rep.small_s_exponent) + ")";
  } else if (large_growth) {
    rep.diagnostic = "not admissible: |K(s)| / |s|^(alpha-1) unbounded as |s| -> inf (log-log slope " +
                     std::to_string(rep.large_s_exponent) + ")";
  } else {
    rep.diagnostic = "admissible on the sampled grid";
  }
  return rep;
}

struct KernelRatioRow {
  double abs_s = 0.0;
  cplx ratio{};  // K^W(beta = 1) / K^ABC at s = |s| e^{i theta}
};

/// Tabulates K^W with beta = 1 against K^ABC along the upper ray. The two are
/// different functions (K^W|_{beta=1} = B / (s^(1-a) + 1 - a)); the table
/// makes the discrepancy visible.
inline std::vector<KernelRatioRow> abc_w_ratio(double alpha, double B, double theta,
                                               std::span<const double> radii) {
  const KernelParams abc = KernelParams::abc(alpha, B);
  const KernelParams w1 = KernelParams::w(alpha, 1.0, B);
  std::vector<KernelRatioRow> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    const cplx s = std::polar(r, theta);
    rows.push_back({r, eval_kernel(w1, s) / eval_kernel(abc, s)});
  }
  return rows;
}

}  // namespace fracres
