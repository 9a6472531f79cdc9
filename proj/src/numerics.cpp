#include "hydrec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Dense>

namespace hydrec {

SpatialGrid::SpatialGrid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw std::invalid_argument("SpatialGrid: require finite x_min < x_max");
  }
  if (n_points < 8) {
    throw std::invalid_argument("SpatialGrid: need at least 8 points");
  }
  dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
  if (!(dx_ > 0.0)) throw std::invalid_argument("SpatialGrid: spacing underflows");
}

std::vector<double> SpatialGrid::points() const {
  std::vector<double> xs(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) xs[j] = point(j);
  return xs;
}

TimeNodes::TimeNodes(double t0, double dt, std::size_t count) : t0_(t0), dt_(dt), count_(count) {
  if (!std::isfinite(t0) || !std::isfinite(dt) || !(dt > 0.0)) {
    throw std::invalid_argument("TimeNodes: require finite t0 and dt > 0");
  }
  if (count < 1) throw std::invalid_argument("TimeNodes: need at least one node");
}

GridField::GridField(SpatialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("GridField: value count does not match grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("GridField: non-finite value");
  }
}

GridField::GridField(SpatialGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

PhysicalConstants::PhysicalConstants(double hbar, double mass) : hbar_(hbar), mass_(mass) {
  if (!std::isfinite(hbar) || !(hbar > 0.0) || !std::isfinite(mass) || !(mass > 0.0)) {
    throw std::invalid_argument("PhysicalConstants: hbar and mass must be finite and positive");
  }
}

GridField cumulative_integral(const GridField& f, Diagnostics* diag, double edge_tolerance) {
  const auto v = f.values();
  const double half_dx = 0.5 * f.grid().spacing();
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t j = 1; j < v.size(); ++j) {
    out[j] = out[j - 1] + half_dx * (v[j - 1] + v[j]);
  }
  if (diag != nullptr) {
    const double scale = f.max_abs();
    const double edge = std::max(std::abs(v.front()), std::abs(v.back()));
    if (scale > 0.0 && edge > edge_tolerance * scale) {
      std::ostringstream msg;
      msg << "cumulative_integral: field has not decayed at the grid edge (edge/max = "
          << edge / scale << ")";
      diag->warn(msg.str());
    }
  }
  return {f.grid(), std::move(out)};
}

double integrate(const GridField& f) {
  const auto v = f.values();
  double sum = 0.5 * (v.front() + v.back());
  for (std::size_t j = 1; j + 1 < v.size(); ++j) sum += v[j];
  return sum * f.grid().spacing();
}

Eigen::MatrixXd differentiation_matrix(const TimeNodes& nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.count());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  if (n < 2) return d;

  // Barycentric weights of equispaced nodes: w_k = (-1)^k binom(m, k).
  const std::size_t m = nodes.m();
  std::vector<double> w(m + 1);
  double binom = 1.0;
  for (std::size_t k = 0; k <= m; ++k) {
    w[k] = (k % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * static_cast<double>(m - k) / static_cast<double>(k + 1);
  }

  const double h = nodes.dt();
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double entry = (w[k] / w[j]) / (static_cast<double>(j - k) * h);
      d(j, k) = entry;
      diag -= entry;
    }
    d(j, j) = diag;
  }
  return d;
}

namespace {

// Weights mapping the samples of a window onto the fitted polynomial's value at
// local index `target`.
Eigen::VectorXd fit_weights(std::size_t window, std::size_t degree, std::size_t target) {
  const auto rows = static_cast<Eigen::Index>(window);
  const auto cols = static_cast<Eigen::Index>(degree + 1);
  const double half = std::max(1.0, 0.5 * static_cast<double>(window - 1));
  Eigen::MatrixXd vander(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double u = (static_cast<double>(i) - static_cast<double>(target)) / half;
    double p = 1.0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      vander(i, c) = p;
      p *= u;
    }
  }
  // At u = 0 only the constant basis function is nonzero, so the fitted value
  // is the first coefficient of the least-squares solution.
  const Eigen::MatrixXd pinv =
      vander.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(rows, rows));
  return pinv.row(0).transpose();
}

}  // namespace

GridField smooth_local_poly(const GridField& f, std::size_t window, std::size_t degree) {
  if (window % 2 == 0) throw std::invalid_argument("smooth_local_poly: window must be odd");
  if (degree >= window) throw std::invalid_argument("smooth_local_poly: degree must be < window");
  if (window > f.size()) throw std::invalid_argument("smooth_local_poly: window exceeds grid");
  if (window == 1) return f;

  const auto v = f.values();
  const std::size_t n = v.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);

  const Eigen::VectorXd centered = fit_weights(window, degree, half);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t start = 0;
    std::size_t target = half;
    if (j < half) {
      start = 0;
      target = j;
    } else if (j + half >= n) {
      start = n - window;
      target = j - start;
    } else {
      start = j - half;
    }
    const Eigen::VectorXd edge_weights =
        (target == half) ? Eigen::VectorXd() : fit_weights(window, degree, target);
    const Eigen::VectorXd& w = (target == half) ? centered : edge_weights;
    double acc = 0.0;
    for (std::size_t i = 0; i < window; ++i) acc += w[static_cast<Eigen::Index>(i)] * v[start + i];
    out[j] = acc;
  }
  return {f.grid(), std::move(out)};
}

double relative_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("relative_l2: size mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace hydrec

namespace hydrec {

SymmetricGrid::SymmetricGrid(double extent, std::size_t n_points)
    : extent_(extent), half_(0), spacing_(0.0) {
  if (n_points % 2 == 0) throw std::invalid_argument("SymmetricGrid: point count must be odd");
  if (!std::isfinite(extent) || extent < 0.0) {
    throw std::invalid_argument("SymmetricGrid: extent must be finite and non-negative");
  }
  half_ = n_points / 2;
  if (half_ == 0) {
    if (extent != 0.0) throw std::invalid_argument("SymmetricGrid: single point requires zero extent");
    return;
  }
  if (extent == 0.0) throw std::invalid_argument("SymmetricGrid: extent must be positive");
  spacing_ = extent / static_cast<double>(half_);
}

SymmetricGrid SymmetricGrid::from_spacing(double spacing, std::size_t half_count) {
  if (!std::isfinite(spacing) || !(spacing > 0.0)) {
    throw std::invalid_argument("SymmetricGrid: spacing must be positive");
  }
  return {spacing * static_cast<double>(half_count), half_count, spacing};
}

SymmetricGrid SymmetricGrid::from_parts(double extent, std::size_t half_count, double spacing) {
  if (half_count == 0) return SymmetricGrid(0.0, 1);
  const SymmetricGrid nominal = from_spacing(spacing, half_count);
  if (!(std::abs(nominal.extent_ - extent) <= 1e-12 * std::abs(extent))) {
    throw std::invalid_argument("SymmetricGrid: extent inconsistent with spacing");
  }
  return {extent, half_count, spacing};
}

SymmetricGrid SymmetricGrid::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("SymmetricGrid: scale factor must be positive");
  return {extent_ * factor, half_, spacing_ * factor};
}

}  // namespace hydrec
