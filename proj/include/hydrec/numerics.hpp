#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hydrec/diagnostics.hpp"

namespace hydrec {

/// Relative edge amplitude above which a field is considered not to have
/// decayed at the grid boundary.
inline constexpr double kDefaultEdgeTolerance = 1e-8;

/// Uniform lattice of positions x_min, x_min + dx, ..., x_max.
class SpatialGrid {
 public:
  SpatialGrid(double x_min, double x_max, std::size_t n_points);

  [[nodiscard]] double x_min() const { return x_min_; }
  [[nodiscard]] double x_max() const { return x_max_; }
  [[nodiscard]] std::size_t size() const { return n_points_; }
  [[nodiscard]] double spacing() const { return dx_; }
  [[nodiscard]] double point(std::size_t j) const { return x_min_ + static_cast<double>(j) * dx_; }
  [[nodiscard]] std::vector<double> points() const;

  bool operator==(const SpatialGrid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_points_;
  double dx_;
};

/// m+1 uniformly spaced sample times t_0 + j*dt.
class TimeNodes {
 public:
  TimeNodes(double t0, double dt, std::size_t count);

  [[nodiscard]] double t0() const { return t0_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] std::size_t count() const { return count_; }
  /// Highest polynomial degree the nodes support (count - 1).
  [[nodiscard]] std::size_t m() const { return count_ - 1; }
  [[nodiscard]] double time(std::size_t j) const { return t0_ + static_cast<double>(j) * dt_; }
  /// floor(m/2); for an even node count this is the lower of the two middle nodes.
  [[nodiscard]] std::size_t central_index() const { return m() / 2; }

  bool operator==(const TimeNodes&) const = default;

 private:
  double t0_;
  double dt_;
  std::size_t count_;
};

/// Real samples on a SpatialGrid. Values are finite by construction.
class GridField {
 public:
  GridField(SpatialGrid grid, std::vector<double> values);
  /// Zero field on `grid`.
  explicit GridField(SpatialGrid grid);

  [[nodiscard]] const SpatialGrid& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t j) const { return values_[j]; }
  [[nodiscard]] double max_abs() const;

  bool operator==(const GridField&) const = default;

 private:
  SpatialGrid grid_;
  std::vector<double> values_;
};

/// hbar and particle mass; natural units by default.
class PhysicalConstants {
 public:
  explicit PhysicalConstants(double hbar = 1.0, double mass = 1.0);

  [[nodiscard]] double hbar() const { return hbar_; }
  [[nodiscard]] double mass() const { return mass_; }

  bool operator==(const PhysicalConstants&) const = default;

 private:
  double hbar_;
  double mass_;
};

/// Running trapezoidal integral F(x_j) = int_{x_min}^{x_j} f dx, with F(x_min) = 0.
///
/// Stands in for the integral from -infinity, which is only valid when f has
/// decayed at the left edge. A warning is issued when |f| at either edge
/// exceeds `edge_tolerance * max|f|`.
GridField cumulative_integral(const GridField& f, Diagnostics* diag = nullptr,
                              double edge_tolerance = kDefaultEdgeTolerance);

/// Trapezoidal integral over the whole grid.
double integrate(const GridField& f);

/// Derivative of each Lagrange cardinal polynomial at each node.
///
/// D(j, k) = l_k'(t_j). Applying D to nodal samples of a polynomial of degree
/// <= m returns its derivative at the nodes exactly (up to rounding).
Eigen::MatrixXd differentiation_matrix(const TimeNodes& nodes);

/// Local least-squares polynomial smoothing (Savitzky-Golay type).
///
/// Each sample is replaced by the value of the degree-`degree` polynomial fit
/// over a centered window of `window` samples; near the edges the window is
/// shifted inward so it stays inside the grid.
GridField smooth_local_poly(const GridField& f, std::size_t window, std::size_t degree);

/// Relative L2 distance ||a - b|| / ||b||.
double relative_l2(std::span<const double> a, std::span<const double> b);

}  // namespace hydrec

namespace hydrec {

/// Symmetric odd-sized lattice y_j = j * spacing, j = -J..J, used for the
/// off-diagonal variable of the density matrix and for momentum lattices.
class SymmetricGrid {
 public:
  /// `n_points` must be odd; n_points == 1 gives the single point 0 (extent must then be 0).
  SymmetricGrid(double extent, std::size_t n_points);
  /// Lattice with given spacing and half count J (2J+1 points).
  static SymmetricGrid from_spacing(double spacing, std::size_t half_count);
  /// Restores a lattice with exactly these stored values (used by file readers);
  /// extent must agree with spacing * half_count to rounding.
  static SymmetricGrid from_parts(double extent, std::size_t half_count, double spacing);

  [[nodiscard]] double extent() const { return extent_; }
  [[nodiscard]] std::size_t size() const { return 2 * half_ + 1; }
  [[nodiscard]] std::size_t half_count() const { return half_; }
  [[nodiscard]] double spacing() const { return spacing_; }
  /// Index i in [0, size()) maps to signed offset i - J.
  [[nodiscard]] double point(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(half_)) * spacing_;
  }
  [[nodiscard]] std::size_t zero_index() const { return half_; }
  /// Index of the point mirrored through zero.
  [[nodiscard]] std::size_t mirror(std::size_t i) const { return 2 * half_ - i; }
  [[nodiscard]] SymmetricGrid scaled(double factor) const;

  bool operator==(const SymmetricGrid&) const = default;

 private:
  SymmetricGrid(double extent, std::size_t half, double spacing)
      : extent_(extent), half_(half), spacing_(spacing) {}

  double extent_;
  std::size_t half_;
  double spacing_;
};

}  // namespace hydrec
