#include "hydrec/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace hydrec {

namespace {

// a_n(y) = (2y/hbar)^n / n! for n = 0..order at every lattice point, by recurrence.
std::vector<std::vector<double>> running_terms(const SymmetricGrid& y_grid, double hbar,
                                               int order) {
  std::vector<std::vector<double>> a(static_cast<std::size_t>(order) + 1,
                                     std::vector<double>(y_grid.size()));
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    const double z = 2.0 * y_grid.point(j) / hbar;
    double term = 1.0;
    a[0][j] = term;
    for (int n = 1; n <= order; ++n) {
      term = term * z / static_cast<double>(n);
      a[static_cast<std::size_t>(n)][j] = term;
    }
  }
  return a;
}

constexpr double kRegionSlack = 1e-12;

bool in_region(double x, double y, const ComparisonRegion& r) {
  return std::abs(x) <= r.x_max + kRegionSlack && std::abs(y) <= r.y_max + kRegionSlack;
}

double diagonal_trace(const DensityMatrixGrid& rho) {
  const auto col = static_cast<Eigen::Index>(rho.y_grid.zero_index());
  const auto n = rho.values.rows();
  double sum = 0.5 * (rho.values(0, col).real() + rho.values(n - 1, col).real());
  for (Eigen::Index i = 1; i + 1 < n; ++i) sum += rho.values(i, col).real();
  return sum * rho.x_grid.spacing();
}

// Bilinear interpolation of rho at (x, y); nullopt outside its lattice.
std::optional<Complex> bilinear(const DensityMatrixGrid& rho, double x, double y) {
  double u = (x - rho.x_grid.x_min()) / rho.x_grid.spacing();
  const double last_x = static_cast<double>(rho.x_grid.size() - 1);
  if (u < -1e-9 || u > last_x + 1e-9) return std::nullopt;
  const std::size_t ny = rho.y_grid.size();
  double v = 0.0;
  if (ny > 1) {
    v = y / rho.y_grid.spacing() + static_cast<double>(rho.y_grid.half_count());
    if (v < -1e-9 || v > static_cast<double>(ny - 1) + 1e-9) return std::nullopt;
  } else if (std::abs(y) > 1e-12) {
    return std::nullopt;
  }
  u = std::clamp(u, 0.0, last_x);
  v = std::clamp(v, 0.0, static_cast<double>(ny - 1));
  const auto i0 = std::min(static_cast<Eigen::Index>(std::floor(u)), rho.values.rows() - 1);
  const auto j0 = std::min(static_cast<Eigen::Index>(std::floor(v)), rho.values.cols() - 1);
  const auto i1 = std::min(i0 + 1, rho.values.rows() - 1);
  const auto j1 = std::min(j0 + 1, rho.values.cols() - 1);
  const double fu = u - static_cast<double>(i0);
  const double fv = v - static_cast<double>(j0);
  return (1.0 - fu) * (1.0 - fv) * rho.values(i0, j0) + fu * (1.0 - fv) * rho.values(i1, j0) +
         (1.0 - fu) * fv * rho.values(i0, j1) + fu * fv * rho.values(i1, j1);
}

}  // namespace

TaylorReconstruction assemble(std::span<const GridField> moments, const SymmetricGrid& y_grid,
                              double hbar) {
  if (moments.empty()) throw std::invalid_argument("assemble: need at least f_0");
  if (!(hbar > 0.0)) throw std::invalid_argument("assemble: hbar must be positive");
  const SpatialGrid& grid = moments.front().grid();
  for (const GridField& f : moments) {
    if (!(f.grid() == grid)) throw std::invalid_argument("assemble: moments must share one grid");
  }
  const int order = static_cast<int>(moments.size()) - 1;
  const auto a = running_terms(y_grid, hbar, order);

  TaylorReconstruction rec{order,
                           std::vector<GridField>(moments.begin(), moments.end()),
                           hbar,
                           {grid, y_grid,
                            Eigen::MatrixXcd(static_cast<Eigen::Index>(grid.size()),
                                             static_cast<Eigen::Index>(y_grid.size())),
                            0},
                           {},
                           0.0,
                           false};

  const std::size_t ny = y_grid.size();
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < ny; ++j) {
      double re = 0.0;
      double im = 0.0;
      for (int n = 0; n <= order; ++n) {
        const auto un = static_cast<std::size_t>(n);
        const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;  // real part of i^n or i^(n-1)
        const double term = sign * moments[un][i] * a[un][j];
        if (n % 2 == 0) {
          re += term;
        } else {
          im += term;
        }
      }
      rec.values.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(re, im);
    }
  });

  rec.max_term_magnitude.resize(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    const auto un = static_cast<std::size_t>(n);
    double amax = 0.0;
    for (double v : a[un]) amax = std::max(amax, std::abs(v));
    rec.max_term_magnitude[un] = moments[un].max_abs() * amax;
    if (!std::isfinite(rec.max_term_magnitude[un]) || rec.max_term_magnitude[un] > 1e300) {
      rec.overflow_risk = true;
    }
  }

  const double rho_max = rec.values.values.cwiseAbs().maxCoeff();
  if (order > 0) {
    const double last_scale = moments.back().max_abs();
    double radius = 0.0;
    // Lattice points ordered by |y|; the last term grows monotonically with |y|.
    for (std::size_t j = y_grid.zero_index(); j < ny; ++j) {
      if (last_scale * std::abs(a.back()[j]) < 1e-6 * rho_max) {
        radius = std::abs(y_grid.point(j));
      } else {
        break;
      }
    }
    rec.trust_radius = radius;
  }
  return rec;
}

RealImagParts real_imag_split(const TaylorReconstruction& rec) {
  const auto a = running_terms(rec.values.y_grid, rec.hbar, rec.order);
  const auto nx = static_cast<Eigen::Index>(rec.values.x_grid.size());
  const auto ny = static_cast<Eigen::Index>(rec.values.y_grid.size());
  RealImagParts parts{Eigen::MatrixXd::Zero(nx, ny), Eigen::MatrixXd::Zero(nx, ny)};
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      double re = 0.0;
      double im = 0.0;
      for (int k = 0; 2 * k <= rec.order; ++k) {
        const auto n = static_cast<std::size_t>(2 * k);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        re += sign * rec.moments[n][static_cast<std::size_t>(i)] * a[n][static_cast<std::size_t>(j)];
      }
      for (int k = 0; 2 * k + 1 <= rec.order; ++k) {
        const auto n = static_cast<std::size_t>(2 * k + 1);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        im += sign * rec.moments[n][static_cast<std::size_t>(i)] * a[n][static_cast<std::size_t>(j)];
      }
      parts.real(i, j) = re;
      parts.imag(i, j) = im;
    }
  }
  return parts;
}

RescalingReport hbar_rescaling_check(std::span<const GridField> moments,
                                     const SymmetricGrid& y_grid, double hbar, double scale,
                                     double tolerance) {
  if (!(scale > 0.0)) throw std::invalid_argument("hbar_rescaling_check: scale must be positive");
  const TaylorReconstruction base = assemble(moments, y_grid, hbar);
  const TaylorReconstruction scaled = assemble(moments, y_grid.scaled(scale), scale * hbar);
  const double norm = base.values.values.cwiseAbs().maxCoeff();
  const double dev = (base.values.values - scaled.values.values).cwiseAbs().maxCoeff();
  RescalingReport report;
  report.max_relative_deviation = norm > 0.0 ? dev / norm : dev;
  report.holds = report.max_relative_deviation <= tolerance;
  return report;
}

double hermiticity_defect(const DensityMatrixGrid& rho) {
  double defect = 0.0;
  const auto ny = static_cast<std::size_t>(rho.values.cols());
  for (Eigen::Index i = 0; i < rho.values.rows(); ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const auto mj = static_cast<Eigen::Index>(rho.y_grid.mirror(j));
      defect = std::max(defect, std::abs(rho.values(i, static_cast<Eigen::Index>(j)) -
                                         std::conj(rho.values(i, mj))));
    }
  }
  return defect;
}

ComparisonReport compare(const DensityMatrixGrid& a, const DensityMatrixGrid& b,
                         const ComparisonRegion& region, const std::optional<GridField>& f0) {
  ComparisonReport report;
  report.region = region;
  report.resampled = !(a.x_grid == b.x_grid && a.y_grid == b.y_grid);

  const auto nx = a.values.rows();
  const auto ny = a.values.cols();
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double x = a.x_grid.point(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double y = a.y_grid.point(static_cast<std::size_t>(j));
      if (!in_region(x, y, region)) continue;
      Complex other;
      if (report.resampled) {
        const auto v = bilinear(b, x, y);
        if (!v) continue;
        other = *v;
      } else {
        other = b.values(i, j);
      }
      const Complex diff = a.values(i, j) - other;
      report.sup_error = std::max(report.sup_error, std::abs(diff));
      report.sup_error_real = std::max(report.sup_error_real, std::abs(diff.real()));
      sum_sq += std::norm(diff);
      ++report.cells_compared;
    }
  }
  if (report.cells_compared == 0) {
    throw std::invalid_argument("compare: lattices do not overlap inside the region");
  }
  const double cell = a.x_grid.spacing() * (a.y_grid.size() > 1 ? a.y_grid.spacing() : 1.0);
  report.l2_error = std::sqrt(sum_sq * cell);
  report.trace_a = diagonal_trace(a);
  report.trace_b = diagonal_trace(b);
  report.hermiticity_defect = std::max(hermiticity_defect(a), hermiticity_defect(b));

  const auto zero_a = static_cast<Eigen::Index>(a.y_grid.zero_index());
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double diag = a.values(i, zero_a).real();
    double ref = 0.0;
    if (f0) {
      if (!(f0->grid() == a.x_grid)) {
        throw std::invalid_argument("compare: f0 must live on the x lattice of a");
      }
      ref = (*f0)[static_cast<std::size_t>(i)];
    } else if (!report.resampled) {
      ref = b.values(i, zero_a).real();
    } else {
      const auto v = bilinear(b, a.x_grid.point(static_cast<std::size_t>(i)), 0.0);
      if (!v) continue;
      ref = v->real();
    }
    report.diagonal_mismatch = std::max(report.diagonal_mismatch, std::abs(diag - ref));
  }
  return report;
}

}  // namespace hydrec
