#pragma once

// Left-sectorial inversion contour, its quadrature, and the map z = s^(alpha-1).
//
// The contour is a Hankel path: it comes in from infinity along the lower ray
// arg s = -theta, turns around the origin on the circle |s| = r_min / t through
// the positive real axis, and leaves along the upper ray arg s = +theta. For
// integrands that are bounded at the origin this equals the integral over the
// two rays meeting at 0; for functions with a singularity at 0 (1/s, s^(-b-1))
// it is the correct inverse Laplace transform.
//
// Only the upper half is stored. For conjugate-symmetric f the lower half is
// the conjugate of the upper half traversed backwards, so
//
//     (1/2 pi i) \int e^{st} f(s) ds = Re sum_j w_j e^{s_j t} f(s_j),
//
// with w_j = ds_j / (i pi).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "fracres/error.hpp"
#include "fracres/gauss_legendre.hpp"

namespace fracres {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Sector of an almost sectorial generator: outside |arg z| < theta_A the
/// resolvent exists and obeys ||(zI - A)^{-1}|| <= M / |z| for |z| >= R.
struct SectorSpec {
  double theta_A = pi / 8.0;
  double M = 1.0;
  double R = 1.0;

  void validate() const {
    if (!(theta_A > 0.0 && theta_A < pi))
      throw ConfigError("contour_engine", "sector angle theta_A must lie in (0, pi)");
    if (!(M > 0.0) || !(R > 0.0))
      throw ConfigError("contour_engine", "sector constants M and R must be positive");
  }
};

/// Contour geometry at time scale 1. Radii are in the scaled variable rho = |s| t.
struct ContourSpec {
  double theta = 0.75 * pi;
  int n_nodes = 64;    // nodes on the upper ray
  double r_min = 0.1;  // radius of the arc joining the rays
  double r_max = 2.0;  // lower bound for the ray truncation radius

  void validate() const {
    if (!(theta > pi / 2.0 && theta < pi))
      throw ConfigError("contour_engine",
                        "contour angle theta=" + std::to_string(theta) + " outside (pi/2, pi)");
    if (n_nodes < 8)
      throw ConfigError("contour_engine", "n_nodes must be at least 8");
    if (!(r_min > 0.0 && r_min < 1.0 && r_max > 1.0))
      throw ConfigError("contour_engine", "radii must satisfy 0 < r_min < 1 < r_max");
  }
};

struct ContourQuadrature {
  std::vector<cplx> nodes;    // upper ray, strictly increasing radius, arg == theta
  std::vector<cplx> weights;
  std::vector<cplx> arc_nodes;  // upper half of the joining arc, arg in [0, theta]
  std::vector<cplx> arc_weights;
  double theta = 0.0;
  double t_scale = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;

  std::size_t size() const noexcept { return nodes.size() + arc_nodes.size(); }

  /// Visits every stored node (arc first, then ray) as fn(index, s, w).
  template <class Fn>
  void for_each_node(Fn&& fn) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < arc_nodes.size(); ++j) fn(idx++, arc_nodes[j], arc_weights[j]);
    for (std::size_t j = 0; j < nodes.size(); ++j) fn(idx++, nodes[j], weights[j]);
  }
};

/// Principal branch power computed in polar form, so |s^p| = |s|^p and
/// arg s^p = p arg s hold to rounding.
inline cplx principal_pow(cplx s, double p) {
  return std::polar(std::pow(std::abs(s), p), p * std::arg(s));
}

inline bool on_branch_cut(cplx s) noexcept { return s.imag() == 0.0 && s.real() <= 0.0; }

/// z = s^(alpha - 1) on the principal branch.
inline cplx redirect(cplx s, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigError("contour_engine", "alpha must lie in (0, 1)");
  if (on_branch_cut(s))
    throw DomainError("contour_engine", "s lies on the branch cut (-inf, 0]");
  return principal_pow(s, alpha - 1.0);
}

inline bool in_sector(cplx z, double theta_A) noexcept {
  return z != cplx(0.0) && std::abs(std::arg(z)) < theta_A;
}

/// (1 - alpha) theta >= theta_A: the redirected contour avoids the sector.
inline bool angle_condition(double alpha, double theta, double theta_A) noexcept {
  return (1.0 - alpha) * theta >= theta_A;
}

/// 3 pi / 4, or the smallest angle meeting the angle condition if that is larger.
inline double default_theta(double alpha, double theta_A) {
  double theta = 0.75 * pi;
  if (!angle_condition(alpha, theta, theta_A)) theta = theta_A / (1.0 - alpha);
  if (!(theta < pi))
    throw ConfigError("contour_engine",
                      "no contour angle below pi satisfies (1 - alpha) theta >= theta_A for alpha=" +
                          std::to_string(alpha));
  return theta;
}

namespace detail {

/// Quadrature at t = 1 for a given ray node count.
inline ContourQuadrature scale_free_rule(const ContourSpec& spec, int ray_nodes, double tol) {
  const double c = -std::cos(spec.theta);
  const double rho_max = std::max(spec.r_max, (std::log(1.0 / tol) + 20.0) / c);
  const double rho_min = spec.r_min;

  constexpr std::size_t panels = 4;
  const std::size_t per_panel = (static_cast<std::size_t>(ray_nodes) + panels - 1) / panels;
  const GaussRule ray = composite_gauss(std::log(rho_min), std::log(rho_max), panels, per_panel);

  const cplx dir = std::polar(1.0, spec.theta);
  const cplx to_weight = 1.0 / cplx(0.0, pi);

  ContourQuadrature q;
  q.theta = spec.theta;
  q.t_scale = 1.0;
  q.rho_min = rho_min;
  q.rho_max = rho_max;
  q.nodes.reserve(ray.nodes.size());
  q.weights.reserve(ray.nodes.size());
  for (std::size_t k = 0; k < ray.nodes.size(); ++k) {
    const double rho = std::exp(ray.nodes[k]);
    q.nodes.push_back(std::polar(rho, spec.theta));
    q.weights.push_back(ray.weights[k] * rho * dir * to_weight);
  }

  const std::size_t arc_points = std::max<std::size_t>(8, static_cast<std::size_t>(ray_nodes) / 4);
  const GaussRule arc = composite_gauss(0.0, spec.theta, 1, arc_points);
  for (std::size_t k = 0; k < arc.nodes.size(); ++k) {
    const cplx s = std::polar(rho_min, arc.nodes[k]);
    q.arc_nodes.push_back(s);
    q.arc_weights.push_back(arc.weights[k] * cplx(0.0, 1.0) * s * to_weight);
  }
  return q;
}

/// Worst relative error of the rule on transforms with known inverses at t = 1.
inline double probe_error(const ContourQuadrature& q) {
  const double betas[] = {0.25, 0.5, 0.75};
  auto integrate = [&](auto&& f) {
    double acc = 0.0;
    q.for_each_node([&](std::size_t, cplx s, cplx w) { acc += (w * std::exp(s) * f(s)).real(); });
    return acc;
  };
  double worst = std::abs(integrate([](cplx s) { return 1.0 / s; }) - 1.0);
  for (double b : betas) {
    const double exact = 1.0 / std::tgamma(1.0 + b);
    const double got = integrate([b](cplx s) { return principal_pow(s, -b - 1.0); });
    worst = std::max(worst, std::abs(got / exact - 1.0));
  }
  return worst;
}

}  // namespace detail

/// Nodes and weights for inversion at time t. The rule is certified on the
/// probe transforms 1/s and s^(-b-1); if it misses tol, RefinementNeeded
/// reports the smallest doubled node count that meets it.
inline ContourQuadrature build_quadrature(const ContourSpec& spec, double t, double tol) {
  spec.validate();
  if (!(t > 0.0) || !std::isfinite(t))
    throw ConfigError("contour_engine", "inversion time must be positive");
  if (!(tol > 0.0 && tol < 1.0))
    throw ConfigError("contour_engine", "tolerance must lie in (0, 1)");

  ContourQuadrature q = detail::scale_free_rule(spec, spec.n_nodes, tol);
  const double err = detail::probe_error(q);
  if (err > tol) {
    int suggested = 0;
    for (int n = spec.n_nodes * 2; n <= 8192; n *= 2) {
      if (detail::probe_error(detail::scale_free_rule(spec, n, tol)) <= tol) {
        suggested = n;
        break;
      }
    }
    throw RefinementNeeded("contour_engine",
                           "tolerance " + std::to_string(tol) + " not reached with " +
                               std::to_string(spec.n_nodes) + " nodes (probe error " +
                               std::to_string(err) + "); suggested n_nodes=" +
                               std::to_string(suggested),
                           suggested);
  }

  // s = rho / t, ds = drho / t
  q.t_scale = t;
  for (auto& s : q.nodes) s /= t;
  for (auto& w : q.weights) w /= t;
  for (auto& s : q.arc_nodes) s /= t;
  for (auto& w : q.arc_weights) w /= t;
  return q;
}

/// (1 / 2 pi i) \int e^{st} f(s) ds for conjugate-symmetric f analytic off (-inf, 0].
template <class F>
double invert_scalar(const ContourQuadrature& quad, F&& f, double t) {
  if (!(std::abs(t - quad.t_scale) <= 1e-12 * quad.t_scale))
    throw ConfigError("contour_engine", "quadrature was built for t=" +
                                            std::to_string(quad.t_scale) + ", not t=" +
                                            std::to_string(t));
  double acc = 0.0;
  quad.for_each_node([&](std::size_t idx, cplx s, cplx w) {
    const cplx v = f(s);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw EvaluationError("non-finite integrand at node " + std::to_string(idx) + " (s=" +
                                std::to_string(s.real()) + "+" + std::to_string(s.imag()) + "i)",
                            idx);
    acc += (w * std::exp(s * t) * v).real();
  });
  return acc;
}

}  // namespace fracres
