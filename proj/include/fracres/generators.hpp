#pragma once

// Discrete generators as (stiffness S, lumped mass M) pairs. The operator is
// A = M^{-1} S, positive semidefinite and self-adjoint in the M inner product;
// its symmetrized form M^{-1/2} S M^{-1/2} is a symmetric tridiagonal matrix
// with the same spectrum, used for the spectral calculus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracres/contour.hpp"
#include "fracres/eigen.hpp"
#include "fracres/error.hpp"
#include "fracres/gauss_legendre.hpp"
#include "fracres/tridiagonal.hpp"

namespace fracres {

enum class OperatorKind { kimura, bessel, diagonal };

inline const char* to_string(OperatorKind k) noexcept {
  switch (k) {
    case OperatorKind::kimura: return "kimura";
    case OperatorKind::bessel: return "bessel";
    case OperatorKind::diagonal: return "diagonal";
  }
  return "?";
}

class DiscreteOperator {
 public:
  DiscreteOperator(OperatorKind kind, TridiagonalMatrix<double> stiffness,
                   std::vector<double> lumped_mass, std::vector<double> coordinates,
                   double nu = 0.0, double r_max = 1.0, SectorSpec sector = {})
      : kind_(kind),
        stiffness_(std::move(stiffness)),
        mass_(std::move(lumped_mass)),
        coords_(std::move(coordinates)),
        nu_(nu),
        r_max_(r_max),
        sector_(sector),
        lazy_(std::make_shared<Lazy>()) {
    stiffness_.validate();
    const std::size_t n = stiffness_.size();
    if (mass_.size() != n || coords_.size() != n)
      throw ConfigError("generators", "mass and coordinate lengths must match the stiffness");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (stiffness_.sub[i] != stiffness_.super[i])
        throw ConfigError("generators", "stiffness matrix must be symmetric");
    for (double m : mass_)
      if (!(m > 0.0)) throw ConfigError("generators", "lumped mass entries must be positive");
    sector_.validate();

    sqrt_mass_.resize(n);
    for (std::size_t i = 0; i < n; ++i) sqrt_mass_[i] = std::sqrt(mass_[i]);
    sym_.diag.resize(n);
    sym_.sub.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) sym_.diag[i] = stiffness_.diag[i] / mass_[i];
    for (std::size_t i = 0; i + 1 < n; ++i)
      sym_.sub[i] = stiffness_.sub[i] / (sqrt_mass_[i] * sqrt_mass_[i + 1]);
    sym_.super = sym_.sub;
  }

  OperatorKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return mass_.size(); }
  const TridiagonalMatrix<double>& stiffness() const noexcept { return stiffness_; }
  const std::vector<double>& lumped_mass() const noexcept { return mass_; }
  const std::vector<double>& sqrt_mass() const noexcept { return sqrt_mass_; }
  const std::vector<double>& coordinates() const noexcept { return coords_; }
  const TridiagonalMatrix<double>& symmetrized() const noexcept { return sym_; }
  double nu() const noexcept { return nu_; }
  double r_max() const noexcept { return r_max_; }
  const SectorSpec& sector() const noexcept { return sector_; }

  /// Computed on first use; safe to call concurrently.
  const EigenDecomposition& eig() const {
    std::call_once(lazy_->once, [this] {
      if (!lazy_->eig) lazy_->eig = eigh_tridiagonal(sym_);
    });
    return *lazy_->eig;
  }

  /// Installs a known decomposition (used when it is exact by construction).
  void preset_eig(EigenDecomposition eig) const {
    std::call_once(lazy_->once, [&] { lazy_->eig = std::move(eig); });
  }

 private:
  struct Lazy {
    std::once_flag once;
    std::optional<EigenDecomposition> eig;
  };

  OperatorKind kind_;
  TridiagonalMatrix<double> stiffness_;
  std::vector<double> mass_;
  std::vector<double> sqrt_mass_;
  std::vector<double> coords_;
  TridiagonalMatrix<double> sym_;
  double nu_;
  double r_max_;
  SectorSpec sector_;
  std::shared_ptr<Lazy> lazy_;
};

namespace detail {

// \int_a^b phi(x) / x dx for the hat piece rising from a to b, given a = i h.
inline double rising_over_x(std::size_t i) {
  if (i == 0) return 1.0;
  const double di = static_cast<double>(i);
  return 1.0 - di * std::log1p(1.0 / di);
}

// Same for the piece falling from a = i h to b = (i+1) h; needs i >= 1.
inline double falling_over_x(std::size_t i) {
  const double di = static_cast<double>(i);
  return (di + 1.0) * std::log1p(1.0 / di) - 1.0;
}

}  // namespace detail

/// P1 elements on the uniform mesh of (0, 1) with n interior nodes and
/// Dirichlet ends. S_ij = \int x(1-x) phi_i' phi_j' (4-point Gauss, exact);
/// M_ii = \int phi_i / (x(1-x)) in closed form.
inline DiscreteOperator assemble_kimura(int n, SectorSpec sector = {}) {
  if (n < 1) throw ConfigError("generators", "Kimura operator needs n >= 1 interior nodes");
  const std::size_t N = static_cast<std::size_t>(n);
  const double h = 1.0 / static_cast<double>(N + 1);
  const GaussRule g = gauss_legendre(4);

  // element k = [k h, (k+1) h], k = 0..N
  std::vector<double> elem(N + 1);
  for (std::size_t k = 0; k <= N; ++k) {
    const double a = static_cast<double>(k) * h;
    double acc = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
      const double x = a + 0.5 * h * (1.0 + g.nodes[q]);
      acc += 0.5 * h * g.weights[q] * x * (1.0 - x);
    }
    elem[k] = acc / (h * h);
  }

  TridiagonalMatrix<double> S;
  S.diag.resize(N);
  S.sub.resize(N - 1);
  std::vector<double> M(N), x(N);
  for (std::size_t j = 0; j < N; ++j) {
    const std::size_t i = j + 1;  // node index
    S.diag[j] = elem[i - 1] + elem[i];
    if (j + 1 < N) S.sub[j] = -elem[i];
    // 1/(x(1-x)) = 1/x + 1/(1-x); the mirrored weight uses node index N+1-i
    const std::size_t im = N + 1 - i;
    M[j] = detail::rising_over_x(i - 1) + detail::falling_over_x(i) +
           detail::rising_over_x(im - 1) + detail::falling_over_x(im);
    x[j] = static_cast<double>(i) * h;
  }
  S.super = S.sub;
  return DiscreteOperator(OperatorKind::kimura, std::move(S), std::move(M), std::move(x), 0.0, 1.0, sector);
}

/// P1 elements for -(r^p u')' / r^p, p = 2 nu + 1, on [0, r_max] with nodes
/// r_k = k h, k = 0..n-1 (natural condition at 0, Dirichlet at r_max).
/// Weighted integrals are closed form on the first element, where r^p is not
/// smooth, and 8-point Gauss elsewhere. M is the row sum \int phi_i r^p.
inline DiscreteOperator assemble_bessel(double nu, double r_max, int n, SectorSpec sector = {}) {
  if (!(nu > -0.5))
    throw ConfigError("generators", "Bessel index nu=" + std::to_string(nu) +
                                        " rejected: need nu > -1/2 for a locally integrable weight");
  if (!(r_max > 0.0)) throw ConfigError("generators", "Bessel truncation radius must be positive");
  if (n < 2) throw ConfigError("generators", "Bessel operator needs n >= 2 nodes");
  const std::size_t N = static_cast<std::size_t>(n);
  const double h = r_max / static_cast<double>(N);
  const double p = 2.0 * nu + 1.0;
  const GaussRule g = gauss_legendre(8);

  // per element: stiffness weight, rising and falling mass moments
  std::vector<double> ws(N), mr(N), mf(N);
  ws[0] = std::pow(h, p + 1.0) / (p + 1.0) / (h * h);
  mr[0] = std::pow(h, p + 1.0) / (p + 2.0);
  mf[0] = std::pow(h, p + 1.0) * (1.0 / (p + 1.0) - 1.0 / (p + 2.0));
  for (std::size_t k = 1; k < N; ++k) {
    const double a = static_cast<double>(k) * h;
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double xi = 0.5 * (1.0 + g.nodes[q]);
      const double w = 0.5 * g.weights[q] * h * std::pow(a + h * xi, p);
      s0 += w;
      s1 += w * xi;
    }
    ws[k] = s0 / (h * h);
    mr[k] = s1;
    mf[k] = s0 - s1;
  }

  TridiagonalMatrix<double> S;
  S.diag.assign(N, 0.0);
  S.sub.resize(N - 1);
  std::vector<double> M(N, 0.0), r(N);
  for (std::size_t k = 0; k < N; ++k) {
    // element k joins node k (falling piece) and node k+1 (rising piece)
    S.diag[k] += ws[k];
    M[k] += mf[k];
    if (k + 1 < N) {
      S.diag[k + 1] += ws[k];
      S.sub[k] = -ws[k];
      M[k + 1] += mr[k];
    }
    r[k] = static_cast<double>(k) * h;
  }
  S.super = S.sub;
  return DiscreteOperator(OperatorKind::bessel, std::move(S), std::move(M), std::move(r), nu, r_max, sector);
}

/// S = diag(eigenvalues), M = I; the decomposition is installed exactly.
inline DiscreteOperator make_diagonal(std::span<const double> eigenvalues, SectorSpec sector = {}) {
  const std::size_t n = eigenvalues.size();
  if (n == 0) throw ConfigError("generators", "diagonal operator needs at least one eigenvalue");
  for (double v : eigenvalues)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ConfigError("generators", "diagonal eigenvalues must be finite and nonnegative");
  TridiagonalMatrix<double> S;
  S.diag.assign(eigenvalues.begin(), eigenvalues.end());
  S.sub.assign(n - 1, 0.0);
  S.super.assign(n - 1, 0.0);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = static_cast<double>(k + 1) / static_cast<double>(n + 1);
  DiscreteOperator op(OperatorKind::diagonal, std::move(S), std::vector<double>(n, 1.0), std::move(x), 0.0, 1.0,
                      sector);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return eigenvalues[a] < eigenvalues[b]; });
  EigenDecomposition eig;
  eig.values.resize(n);
  eig.vectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    eig.values[k] = eigenvalues[order[k]];
    eig.vectors[k * n + order[k]] = 1.0;
  }
  op.preset_eig(std::move(eig));
  return op;
}

inline DiscreteOperator make_diagonal(std::initializer_list<double> eigenvalues) {
  return make_diagonal(std::span<const double>(eigenvalues.begin(), eigenvalues.size()));
}

/// sqrt(sum_i M_i x_i^2), the discrete weighted L2 norm.
inline double weighted_norm(const DiscreteOperator& op, std::span<const double> x) {
  const auto& m = op.lumped_mass();
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += m[i] * x[i] * x[i];
  return std::sqrt(acc);
}

/// Distance from z to the (unclamped) spectrum.
inline double spectral_distance(const DiscreteOperator& op, cplx z) {
  const auto& ev = op.eig().values;
  auto it = std::lower_bound(ev.begin(), ev.end(), z.real());
  double best = std::numeric_limits<double>::infinity();
  if (it != ev.end()) best = std::abs(z - *it);
  if (it != ev.begin()) best = std::min(best, std::abs(z - *(it - 1)));
  return best;
}

/// Exact ||(zI - A)^{-1}|| in the M inner product (A is self-adjoint there).
inline double resolvent_norm(const DiscreteOperator& op, cplx z) {
  return 1.0 / spectral_distance(op, z);
}

/// x = (zI - A)^{-1} b, from (zM - S) x = M b.
inline std::vector<cplx> resolve(const DiscreteOperator& op, cplx z, std::span<const cplx> b) {
  const std::size_t n = op.size();
  if (b.size() != n) throw ConfigError("generators", "vector length does not match the operator");
  if (std::abs(z.imag()) < 1e-12 && spectral_distance(op, z) < 1e-12)
    throw NumericalError("generators", "spectral point z=" + std::to_string(z.real()) +
                                           " is within 1e-12 of an eigenvalue");
  const auto& S = op.stiffness();
  const auto& M = op.lumped_mass();
  TridiagonalMatrix<cplx> m;
  m.diag.resize(n);
  m.sub.resize(n - 1);
  std::vector<cplx> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.diag[i] = z * M[i] - S.diag[i];
    rhs[i] = M[i] * b[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) m.sub[i] = -S.sub[i];
  m.super = m.sub;
  return solve_tridiagonal(m, std::span<const cplx>(rhs));
}

inline std::vector<cplx> resolve(const DiscreteOperator& op, cplx z, std::span<const double> b) {
  std::vector<cplx> bc(b.begin(), b.end());
  return resolve(op, z, std::span<const cplx>(bc));
}

/// A^gamma x = M^{-1/2} Ã^gamma M^{1/2} x.
inline std::vector<double> apply_power(const DiscreteOperator& op, double gamma,
                                       std::span<const double> x) {
  const auto& sm = op.sqrt_mass();
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = sm[i] * x[i];
  y = frac_power_apply(op.eig(), gamma, y);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] /= sm[i];
  return y;
}

struct SectorialityReport {
  double M_theta_hat = 0.0;  // sup |z| ||(zI - A)^{-1}||
  bool pass = false;
  cplx worst_z{};
  std::size_t samples = 0;
};

/// sup of |z| ||(zI - A)^{-1}|| over z = rho e^{+-i phi}, phi in [theta, pi],
/// rho in radii with rho >= 1, using the exact spectral distance.
inline SectorialityReport sectoriality_check(const DiscreteOperator& op, double theta,
                                             std::span<const double> radii, int n_angles = 65) {
  if (!(theta > pi / 2.0 && theta < pi))
    throw ConfigError("generators", "sectoriality angle must lie in (pi/2, pi)");
  if (n_angles < 2) throw ConfigError("generators", "need at least two sample angles");
  SectorialityReport rep;
  for (double rho : radii) {
    if (!(rho >= 1.0)) continue;
    for (int k = 0; k < n_angles; ++k) {
      const double phi = theta + (pi - theta) * k / (n_angles - 1);
      for (double sign : {1.0, -1.0}) {
        const cplx z = std::polar(rho, sign * phi);
        const double val = std::abs(z) * resolvent_norm(op, z);
        ++rep.samples;
        if (!(val <= rep.M_theta_hat) || rep.samples == 1) {
          if (!(val <= rep.M_theta_hat)) rep.M_theta_hat = val;
          rep.worst_z = z;
        }
      }
    }
  }
  rep.pass = rep.samples > 0 && std::isfinite(rep.M_theta_hat);
  return rep;
}

}  // namespace fracres
