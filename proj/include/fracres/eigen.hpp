#pragma once

// Symmetric tridiagonal eigendecomposition (implicit QL, after EISPACK tql2)
// and the spectral calculus built on it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fracres/error.hpp"
#include "fracres/tridiagonal.hpp"

namespace fracres {

struct EigenDecomposition {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row k is the unit eigenvector for values[k]

  std::size_t size() const noexcept { return values.size(); }

  std::span<const double> vector(std::size_t k) const {
    return {vectors.data() + k * size(), size()};
  }

  /// Coefficients q_k . x.
  std::vector<double> project(std::span<const double> x) const {
    const std::size_t n = size();
    std::vector<double> c(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double* q = vectors.data() + k * n;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += q[i] * x[i];
      c[k] = acc;
    }
    return c;
  }

  /// sum_k c_k q_k.
  std::vector<double> synthesize(std::span<const double> c) const {
    const std::size_t n = size();
    std::vector<double> x(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (c[k] == 0.0) continue;
      const double* q = vectors.data() + k * n;
      for (std::size_t i = 0; i < n; ++i) x[i] += c[k] * q[i];
    }
    return x;
  }
};

inline EigenDecomposition eigh_tridiagonal(const TridiagonalMatrix<double>& m) {
  m.validate();
  const std::size_t n = m.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (m.sub[i] != m.super[i])
      throw ConfigError("numerics_core",
                        "eigh_tridiagonal needs a symmetric matrix (sub != super at " +
                            std::to_string(i) + ")");

  std::vector<double> d = m.diag;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = m.sub[i];

  // V stores eigenvectors as rows so each rotation touches two contiguous rows.
  std::vector<double> V(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const int max_iter = 60;
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t mm = l;
    while (mm < n) {
      if (std::abs(e[mm]) <= eps * tst1) break;
      ++mm;
    }
    if (mm > l) {
      int iter = 0;
      do {
        if (++iter > max_iter)
          throw NumericalError("numerics_core",
                               "QL iteration did not converge for eigenvalue " + std::to_string(l));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[mm];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = mm; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          double* vi = V.data() + i * n;
          double* vj = V.data() + (i + 1) * n;
          for (std::size_t k = 0; k < n; ++k) {
            const double hk = vj[k];
            vj[k] = s * vi[k] + c * hk;
            vi[k] = c * vi[k] - s * hk;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    std::copy_n(V.data() + order[k] * n, n, out.vectors.data() + k * n);
  }
  return out;
}

inline constexpr double kNegativeSpectrumTolerance = 1e-10;

/// lambda^gamma with round-off negatives clamped to zero and 0^0 = 1.
inline double clamped_power(double lambda, double gamma) {
  if (lambda < -kNegativeSpectrumTolerance)
    throw NumericalError("numerics_core", "negative eigenvalue " + std::to_string(lambda) +
                                              ": operator is not positive semidefinite");
  if (gamma == 0.0) return 1.0;
  if (lambda <= 0.0) return 0.0;
  return std::pow(lambda, gamma);
}

/// sum_k lambda_k^gamma (q_k . x) q_k.
inline std::vector<double> frac_power_apply(const EigenDecomposition& eig, double gamma,
                                            std::span<const double> x) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ConfigError("numerics_core", "fractional power gamma must lie in [0, 1]");
  if (x.size() != eig.size()) throw ConfigError("numerics_core", "vector length mismatch");
  std::vector<double> c = eig.project(x);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= clamped_power(eig.values[k], gamma);
  return eig.synthesize(c);
}

}  // namespace fracres
