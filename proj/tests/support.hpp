#pragma once

// Independent numerical references for the test suites. Nothing here calls the
// library's own kernels for the quantity under test.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "hydrec/numerics.hpp"

namespace hydrec::testing {

/// Finite-difference weights for derivatives 0..max_order at x0 over the given
/// abscissae (Fornberg 1988). weights[k][i] multiplies f(x[i]) for d^k/dx^k.
inline std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x,
                                                         int max_order) {
  const std::size_t n = x.size();
  const auto mo = static_cast<std::size_t>(max_order);
  std::vector<std::vector<double>> c(mo + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mo);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

/// Adaptive Simpson quadrature on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-13, int depth = 50) {
  const std::function<double(double, double, double, double, double, double, double, int)> step =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
          return left + right + (left + right - whole) / 15.0;
        }
        return step(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
               step(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return step(a, b, fa, fm, fb, whole, tol, depth);
}

/// Plain loop trapezoid, used as an oracle for the library's running integral.
inline double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

inline GridField sample(const SpatialGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) v[j] = f(grid.point(j));
  return {grid, std::move(v)};
}

/// Relative L2 error restricted to |x| <= x_max.
inline double relative_l2_central(const GridField& a, const GridField& b, double x_max) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a.grid().point(j)) > x_max) continue;
    num += (a[j] - b[j]) * (a[j] - b[j]);
    den += b[j] * b[j];
  }
  return std::sqrt(num / den);
}

/// Symbolic second moment of the unnormalized cat state with hbar = 1:
/// f2 = (1/2) exp(-x^2/2 sigma^2) [(cos 2 k0 x + 1)/sigma^2 + 4 k0^2].
inline double cat_f2(double x, double sigma, double k0) {
  return 0.5 * std::exp(-x * x / (2.0 * sigma * sigma)) *
         ((std::cos(2.0 * k0 * x) + 1.0) / (sigma * sigma) + 4.0 * k0 * k0);
}

/// Closed-form cat density matrix 2 exp(-(x^2+y^2)/2 sigma^2)[cos 2k0x + cos 2k0y].
inline double cat_rho(double x, double y, double sigma, double k0) {
  return 2.0 * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma)) *
         (std::cos(2.0 * k0 * x) + std::cos(2.0 * k0 * y));
}

inline constexpr double kCatSigma = 0.70710678118654752;
inline constexpr double kCatK0 = 2.8284271247461901;

}  // namespace hydrec::testing
