#pragma once

// K-resolvent family V(t) = (1/2 pi i) \int e^{st} K(s) (s^(alpha-1) I + A)^{-1} ds,
// its smoothed action A^gamma V(t), the variation-of-constants solution and a
// numerical check of its Laplace transform.
//
// A is the positive semidefinite generator of generators.hpp. The spectral
// points visited are z = -s^(alpha-1), so the integrand K(s) / (s^(alpha-1) + lambda)
// per mode is analytic off the cut for every lambda >= 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracres/contour.hpp"
#include "fracres/error.hpp"
#include "fracres/gauss_legendre.hpp"
#include "fracres/generators.hpp"
#include "fracres/kernels.hpp"

namespace fracres {

enum class ConvolutionRule {
  product_trapezoid,   // f linear per subinterval, V integrated exactly
  trapezoid_identity,  // plain trapezoid with V(0) := I
};

using Forcing = std::function<std::vector<double>(double)>;

struct EvolutionConfig {
  KernelParams kernel;
  ContourSpec contour;
  double gamma = 0.0;
  std::vector<double> times;
  std::vector<double> u0;
  Forcing forcing;  // empty: homogeneous problem
  double tol = 1e-10;
  ConvolutionRule rule = ConvolutionRule::product_trapezoid;
  int tau_intervals = 64;

  /// Checks everything except the data the operation does not use.
  void validate_for(const DiscreteOperator& op) const {
    kernel.validate();
    if (kernel.kind == KernelKind::caputo_probe)
      throw ConfigError("evolution",
                        "the Caputo symbol is not an admissible multiplier and cannot drive the evolution");
    contour.validate();
    if (!(tol > 0.0 && tol < 1.0)) throw ConfigError("evolution", "tol must lie in (0, 1)");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("evolution", "gamma must lie in [0, 1)");
    if (tau_intervals < 1) throw ConfigError("evolution", "tau_intervals must be positive");
    const double thA = op.sector().theta_A;
    const double phi = (1.0 - kernel.alpha) * contour.theta;
    if (!(phi >= thA) || !(pi - phi >= thA))
      throw ConfigError("evolution", "angle condition fails: (1 - alpha) theta = " + std::to_string(phi) +
                                         " must keep the redirected contour outside the sector of half-angle " +
                                         std::to_string(thA));
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!(times[i] > 0.0) || !std::isfinite(times[i]))
        throw ConfigError("evolution", "times must be positive and finite");
      if (i > 0 && !(times[i] > times[i - 1]))
        throw ConfigError("evolution", "times must be strictly increasing");
    }
  }
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> smoothed_norms;  // ||A^gamma u(t)||_M
  std::vector<std::size_t> node_counts;
};

namespace detail {

// Per-node data of a quadrature: e^{st} w K(s) and s^(alpha-1).
struct NodeTable {
  std::vector<cplx> s;
  std::vector<cplx> coef;  // w e^{st} K(s)
  std::vector<cplx> z;     // s^(alpha-1)
};

inline NodeTable node_table(const ContourQuadrature& q, const KernelParams& k) {
  NodeTable tab;
  tab.s.reserve(q.size());
  tab.coef.reserve(q.size());
  tab.z.reserve(q.size());
  const double t = q.t_scale;
  q.for_each_node([&](std::size_t idx, cplx s, cplx w) {
    const cplx K = eval_kernel(k, s);
    const cplx c = w * std::exp(s * t) * K;
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw EvaluationError("non-finite kernel weight at node " + std::to_string(idx), idx);
    tab.s.push_back(s);
    tab.coef.push_back(c);
    tab.z.push_back(principal_pow(s, k.alpha - 1.0));
  });
  return tab;
}

/// v(lambda, t) for each eigenvalue, negatives clamped to zero.
inline std::vector<double> mode_values(const NodeTable& tab, std::span<const double> lambdas) {
  std::vector<double> out(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lam = std::max(lambdas[k], 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < tab.s.size(); ++j) acc += (tab.coef[j] / (tab.z[j] + lam)).real();
    out[k] = acc;
  }
  return out;
}

/// sum_j Re coef_j (z_j + A)^{-1} rhs_j, via the tridiagonal solver.
template <class Rhs>
std::vector<double> contour_solve(const DiscreteOperator& op, const NodeTable& tab, Rhs&& rhs_at) {
  std::vector<double> acc(op.size(), 0.0);
  for (std::size_t j = 0; j < tab.s.size(); ++j) {
    const std::vector<cplx> b = rhs_at(j);
    const std::vector<cplx> y = resolve(op, -tab.z[j], std::span<const cplx>(b));
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] -= (tab.coef[j] * y[i]).real();
  }
  return acc;
}

inline double euclid(std::span<const double> x) {
  double a = 0.0;
  for (double v : x) a += v * v;
  return std::sqrt(a);
}

inline ContourSpec doubled(ContourSpec spec) {
  spec.n_nodes *= 2;
  return spec;
}

/// Spectral evaluation of sum_k g(lambda_k) (q_k . M^{1/2} x) M^{-1/2} q_k.
template <class G>
std::vector<double> spectral_apply(const DiscreteOperator& op, std::span<const double> x, G&& g) {
  const auto& eig = op.eig();
  const auto& sm = op.sqrt_mass();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sm[i] * x[i];
  std::vector<double> c = eig.project(y);
  const std::vector<double> gv = g(std::span<const double>(eig.values));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= gv[k];
  y = eig.synthesize(c);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= sm[i];
  return y;
}

inline void check_length(const DiscreteOperator& op, std::span<const double> x) {
  if (x.size() != op.size())
    throw ConfigError("evolution", "vector length " + std::to_string(x.size()) +
                                       " does not match operator size " + std::to_string(op.size()));
}

}  // namespace detail

/// Scalar family v(lambda, t) = L^{-1}[K(s) / (s^(alpha-1) + lambda)](t), lambda >= 0.
inline double family_value(const KernelParams& kernel, const ContourSpec& spec, double tol,
                           double lambda, double t) {
  const ContourQuadrature q = build_quadrature(spec, t, tol);
  const double lam = std::max(lambda, 0.0);
  return invert_scalar(
      q, [&](cplx s) { return eval_kernel(kernel, s) / (principal_pow(s, kernel.alpha - 1.0) + lam); }, t);
}

/// V(t) x with one tridiagonal solve per node. The result is recomputed with
/// twice the nodes; a change above 10 tol (relative) raises RefinementNeeded.
inline std::vector<double> resolvent_apply(const DiscreteOperator& op, const EvolutionConfig& cfg, double t,
                                           std::span<const double> x) {
  cfg.validate_for(op);
  detail::check_length(op, x);
  if (!(t > 0.0)) throw ConfigError("evolution", "time must be positive");
  std::vector<cplx> xc(x.begin(), x.end());
  auto once = [&](const ContourSpec& spec) {
    const detail::NodeTable tab = detail::node_table(build_quadrature(spec, t, cfg.tol), cfg.kernel);
    return detail::contour_solve(op, tab, [&](std::size_t) { return xc; });
  };
  const std::vector<double> coarse = once(cfg.contour);
  std::vector<double> fine = once(detail::doubled(cfg.contour));
  std::vector<double> diff(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) diff[i] = fine[i] - coarse[i];
  const double delta = detail::euclid(diff);
  const double scale = std::max(detail::euclid(fine), detail::euclid(x));
  if (delta > 10.0 * cfg.tol * scale)
    throw RefinementNeeded("evolution",
                           "node doubling changed V(t)x by " + std::to_string(delta / scale) +
                               " (relative) at t=" + std::to_string(t),
                           cfg.contour.n_nodes * 4);
  return fine;
}

/// A^gamma V(t) x on the eigendecomposition; gamma = 0 gives V(t) x.
inline std::vector<double> smoothed_apply(const DiscreteOperator& op, const EvolutionConfig& cfg, double t,
                                          std::span<const double> x) {
  cfg.validate_for(op);
  detail::check_length(op, x);
  if (!(t > 0.0)) throw ConfigError("evolution", "time must be positive");
  const detail::NodeTable tab = detail::node_table(build_quadrature(cfg.contour, t, cfg.tol), cfg.kernel);
  return detail::spectral_apply(op, x, [&](std::span<const double> lam) {
    std::vector<double> v = detail::mode_values(tab, lam);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] *= clamped_power(lam[k], cfg.gamma);
    return v;
  });
}

/// Spectral V(t) x, independent of gamma.
inline std::vector<double> resolvent_apply_spectral(const DiscreteOperator& op, const EvolutionConfig& cfg,
                                                    double t, std::span<const double> x) {
  EvolutionConfig c0 = cfg;
  c0.gamma = 0.0;
  return smoothed_apply(op, c0, t, x);
}

/// A^gamma V(t) x through the solver path, for cross-validation.
inline std::vector<double> smoothed_apply_solve(const DiscreteOperator& op, const EvolutionConfig& cfg,
                                                double t, std::span<const double> x) {
  const std::vector<double> v = resolvent_apply(op, cfg, t, x);
  return apply_power(op, cfg.gamma, v);
}

namespace detail {

inline std::vector<double> eval_forcing(const EvolutionConfig& cfg, double tau, std::size_t n) {
  std::vector<double> f;
  try {
    f = cfg.forcing(tau);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError("evolution", "forcing evaluation failed at tau=" + std::to_string(tau) + ": " + e.what());
  }
  if (f.size() != n)
    throw ConfigError("evolution", "forcing at tau=" + std::to_string(tau) + " has length " +
                                       std::to_string(f.size()) + ", expected " + std::to_string(n));
  for (double v : f)
    if (!std::isfinite(v))
      throw NumericalError("evolution", "forcing is not finite at tau=" + std::to_string(tau));
  return f;
}

/// \int_0^t V(t - tau) f(tau) dtau.
inline std::vector<double> duhamel(const DiscreteOperator& op, const EvolutionConfig& cfg, double t) {
  const std::size_t n = op.size();
  const std::size_t m = static_cast<std::size_t>(cfg.tau_intervals);
  const double h = t / static_cast<double>(m);
  // samples in the lag variable sigma = t - tau
  std::vector<std::vector<double>> f(m + 1);
  for (std::size_t i = 0; i <= m; ++i) f[i] = eval_forcing(cfg, t - static_cast<double>(i) * h, n);

  std::vector<double> out(n, 0.0);
  if (cfg.rule == ConvolutionRule::trapezoid_identity) {
    for (std::size_t i = 0; i <= m; ++i) {
      const double sigma = static_cast<double>(i) * h;
      const double wt = (i == 0 || i == m) ? 0.5 * h : h;
      std::vector<double> v;
      if (sigma < 1e-8 * t) {
        v = f[i];
      } else {
        const NodeTable tab = node_table(build_quadrature(cfg.contour, sigma, cfg.tol), cfg.kernel);
        std::vector<cplx> fc(f[i].begin(), f[i].end());
        v = contour_solve(op, tab, [&](std::size_t) { return fc; });
      }
      for (std::size_t k = 0; k < n; ++k) out[k] += wt * v[k];
    }
    return out;
  }

  // On [sigma_i, sigma_{i+1}] with f linear, the integral is
  //   f_{i+1} P1(b) - f_i P1(a) - d (P2(b) - P2(a)),  d = (f_{i+1} - f_i) / h,
  // where P1 = L^{-1}[K/s (...)], P2 = L^{-1}[K/s^2 (...)] are primitives of V
  // vanishing at 0. Collect the coefficient of P1 and P2 at every node sigma_k.
  std::vector<std::vector<double>> a(m + 1, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> b(m + 1, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = (f[i + 1][k] - f[i][k]) / h;
      a[i + 1][k] += f[i + 1][k];
      a[i][k] -= f[i][k];
      b[i + 1][k] -= d;
      b[i][k] += d;
    }
  }
  for (std::size_t i = 1; i <= m; ++i) {
    const double sigma = static_cast<double>(i) * h;
    const NodeTable tab = node_table(build_quadrature(cfg.contour, sigma, cfg.tol), cfg.kernel);
    const std::vector<double> v = contour_solve(op, tab, [&](std::size_t j) {
      const cplx s = tab.s[j];
      const cplx is = 1.0 / s;
      const cplx is2 = is * is;
      std::vector<cplx> r(n);
      for (std::size_t k = 0; k < n; ++k) r[k] = a[i][k] * is + b[i][k] * is2;
      return r;
    });
    for (std::size_t k = 0; k < n; ++k) out[k] += v[k];
  }
  return out;
}

}  // namespace detail

/// u(t) = V(t) u0 + \int_0^t V(t - tau) f(tau) dtau at every configured time.
inline EvolutionResult mild_solution(const DiscreteOperator& op, const EvolutionConfig& cfg) {
  cfg.validate_for(op);
  detail::check_length(op, cfg.u0);
  if (cfg.times.empty()) throw ConfigError("evolution", "no output times");
  EvolutionResult res;
  res.times = cfg.times;
  for (double t : cfg.times) {
    std::vector<double> u = resolvent_apply(op, cfg, t, cfg.u0);
    if (cfg.forcing) {
      const std::vector<double> d = detail::duhamel(op, cfg, t);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += d[i];
    }
    const std::vector<double> au = apply_power(op, cfg.gamma, u);
    const double nrm = weighted_norm(op, au);
    if (!std::isfinite(nrm)) throw NumericalError("evolution", "non-finite solution norm at t=" + std::to_string(t));
    res.smoothed_norms.push_back(nrm);
    res.node_counts.push_back(build_quadrature(detail::doubled(cfg.contour), t, cfg.tol).size());
    res.states.push_back(std::move(u));
  }
  return res;
}

struct LaplaceReport {
  std::vector<double> lhs;  // \int_0^inf e^{-lambda t} V(t) x dt
  std::vector<double> rhs;  // K(lambda) (lambda^(alpha-1) I + A)^{-1} x
  double rel_err = 0.0;
  double quadrature_delta = 0.0;  // fine vs coarse time grid, relative
  double tail_bound = 0.0;        // e^{-lambda T} sup ||V(t) x|| / lambda, relative
  double T = 0.0;
};

/// Both sides of the Laplace identity. The left side uses Gauss panels on a
/// log time grid over [1e-6, 40 / lambda] plus the exact head [0, 1e-6] from
/// the primitive of V; the right side uses the tridiagonal solver.
inline LaplaceReport laplace_check(const DiscreteOperator& op, const EvolutionConfig& cfg, double lambda,
                                   std::span<const double> x) {
  cfg.validate_for(op);
  detail::check_length(op, x);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ConfigError("evolution", "Laplace parameter lambda must be positive");
  const double t0 = 1e-6;
  LaplaceReport rep;
  rep.T = 40.0 / lambda;
  if (!(rep.T > t0)) throw ConfigError("evolution", "lambda too large for the time grid");

  auto table_at = [&](double t) {
    return detail::node_table(build_quadrature(cfg.contour, t, cfg.tol), cfg.kernel);
  };
  const auto& eig = op.eig();
  const std::span<const double> lam(eig.values);

  auto integrate = [&](double width, double& sup) {
    const double l0 = std::log(t0), l1 = std::log(rep.T);
    const std::size_t panels = static_cast<std::size_t>(std::ceil((l1 - l0) / width));
    const GaussRule g = composite_gauss(l0, l1, panels, 16);
    std::vector<double> acc(lam.size(), 0.0);
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double t = std::exp(g.nodes[q]);
      const std::vector<double> v = detail::mode_values(table_at(t), lam);
      const double wt = g.weights[q] * t * std::exp(-lambda * t);
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += wt * v[k];
      if (t >= 0.5 * rep.T) {
        double mx = 0.0;
        for (double vk : v) mx = std::max(mx, std::abs(vk));
        sup = std::max(sup, mx);
      }
    }
    return acc;
  };

  double sup_fine = 0.0, sup_coarse = 0.0;
  std::vector<double> fine = integrate(0.5, sup_fine);
  const std::vector<double> coarse = integrate(1.0, sup_coarse);
  // head: P1(t0) = L^{-1}[K/s (...)](t0), with e^{-lambda t} = 1 to O(lambda t0)
  detail::NodeTable head_tab = table_at(t0);
  for (std::size_t j = 0; j < head_tab.s.size(); ++j) head_tab.coef[j] /= head_tab.s[j];
  const std::vector<double> head = detail::mode_values(head_tab, lam);

  auto synth = [&](const std::vector<double>& modes) {
    return detail::spectral_apply(op, x, [&](std::span<const double>) { return modes; });
  };
  for (std::size_t k = 0; k < fine.size(); ++k) fine[k] += head[k];
  std::vector<double> coarse_full = coarse;
  for (std::size_t k = 0; k < coarse_full.size(); ++k) coarse_full[k] += head[k];
  rep.lhs = synth(fine);
  const std::vector<double> lhs_coarse = synth(coarse_full);

  const cplx z = std::pow(lambda, cfg.kernel.alpha - 1.0);
  const cplx K = eval_kernel(cfg.kernel, cplx(lambda, 0.0));
  const std::vector<cplx> y = resolve(op, -z, x);
  rep.rhs.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) rep.rhs[i] = -(K * y[i]).real();

  std::vector<double> d(rep.lhs.size()), dq(rep.lhs.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = rep.lhs[i] - rep.rhs[i];
    dq[i] = rep.lhs[i] - lhs_coarse[i];
  }
  const double scale = std::max(weighted_norm(op, rep.rhs), 1e-300);
  rep.rel_err = weighted_norm(op, d) / scale;
  rep.quadrature_delta = weighted_norm(op, dq) / scale;
  rep.tail_bound = std::exp(-lambda * rep.T) * sup_fine * weighted_norm(op, x) / lambda / scale;
  if (rep.quadrature_delta > 1e-4)
    throw RefinementNeeded("evolution",
                           "time quadrature for the Laplace check did not converge (delta " +
                               std::to_string(rep.quadrature_delta) + ")",
                           0);
  return rep;
}

}  // namespace fracres
