#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracres/error.hpp"

namespace fracres {

template <class T>
struct TridiagonalMatrix {
  std::vector<T> sub;    // (i+1, i), length n-1
  std::vector<T> diag;   // length n
  std::vector<T> super;  // (i, i+1), length n-1

  std::size_t size() const noexcept { return diag.size(); }

  void validate() const {
    const std::size_t n = diag.size();
    if (n == 0) throw ConfigError("numerics_core", "empty tridiagonal matrix");
    if (sub.size() != n - 1 || super.size() != n - 1)
      throw ConfigError("numerics_core", "off-diagonals must have length n-1");
  }

  std::vector<T> apply(std::span<const T> x) const {
    const std::size_t n = diag.size();
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      T acc = diag[i] * x[i];
      if (i > 0) acc += sub[i - 1] * x[i - 1];
      if (i + 1 < n) acc += super[i] * x[i + 1];
      y[i] = acc;
    }
    return y;
  }
};

namespace detail {

template <class T>
double norm2(std::span<const T> v) {
  double acc = 0.0;
  for (const T& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

template <class T>
std::vector<T> thomas(const TridiagonalMatrix<T>& m, std::span<const T> rhs) {
  const std::size_t n = m.size();
  std::vector<T> c(n), x(n);
  T pivot = m.diag[0];
  if (std::abs(pivot) < 1e-300) throw SingularPivot("zero pivot at index 0", 0);
  c[0] = n > 1 ? m.super[0] / pivot : T{};
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.sub[i - 1] * c[i - 1];
    if (std::abs(pivot) < 1e-300)
      throw SingularPivot("zero pivot at index " + std::to_string(i), i);
    if (i + 1 < n) c[i] = m.super[i] / pivot;
    x[i] = (rhs[i] - m.sub[i - 1] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace detail

/// Elimination without pivoting, one step of iterative refinement, and a
/// residual check: ||m x - rhs|| / ||rhs|| <= 1e-10 or IllConditioned.
template <class T>
std::vector<T> solve_tridiagonal(const TridiagonalMatrix<T>& m, std::span<const T> rhs) {
  m.validate();
  if (rhs.size() != m.size())
    throw ConfigError("numerics_core", "right-hand side length does not match matrix");
  const double rhs_norm = detail::norm2(rhs);
  if (rhs_norm == 0.0) return std::vector<T>(m.size(), T{});

  std::vector<T> x = detail::thomas(m, rhs);
  auto residual = [&](const std::vector<T>& xv) {
    std::vector<T> r = m.apply(std::span<const T>(xv));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    return r;
  };
  const std::vector<T> r = residual(x);
  const std::vector<T> dx = detail::thomas(m, std::span<const T>(r));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];

  const std::vector<T> r2 = residual(x);
  const double rel = detail::norm2(std::span<const T>(r2)) / rhs_norm;
  if (!(rel <= 1e-10))
    throw IllConditioned("relative residual " + std::to_string(rel) + " above 1e-10 after refinement",
                         rel);
  return x;
}

template <class T>
std::vector<T> solve_tridiagonal(const TridiagonalMatrix<T>& m, const std::vector<T>& rhs) {
  return solve_tridiagonal(m, std::span<const T>(rhs));
}

}  // namespace fracres
