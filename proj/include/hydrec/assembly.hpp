#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hydrec/numerics.hpp"
#include "hydrec/simulator.hpp"

namespace hydrec {

/// Taylor polynomial of the density matrix in the off-diagonal variable,
/// rho_N(x, y) = sum_{n<=N} f_n(x)/n! (2iy/hbar)^n.
struct TaylorReconstruction {
  int order = 0;
  std::vector<GridField> moments;  // f_0..f_N
  double hbar = 1.0;
  DensityMatrixGrid values;
  /// max over the y lattice of |f_n(x)| (2|y|/hbar)^n / n!, per order, maximized over x.
  std::vector<double> max_term_magnitude;
  /// Largest |y| on the lattice up to which the last term stays below
  /// 1e-6 * max |rho_N|. Heuristic only: there is no rigorous truncation bound.
  double trust_radius = 0.0;
  /// Some term magnitude exceeded 1e300.
  bool overflow_risk = false;
};

/// Assembles rho_N from moments sharing one grid and time. Uses the running
/// term a_n = a_{n-1} (2y/hbar)/n, so no factorial is formed explicitly.
/// Even orders feed the real part and odd orders the imaginary part only.
TaylorReconstruction assemble(std::span<const GridField> moments, const SymmetricGrid& y_grid,
                              double hbar);

struct RealImagParts {
  Eigen::MatrixXd real;
  Eigen::MatrixXd imag;
};

/// sum_n (-1)^n f_2n (2y/hbar)^2n/(2n)!  and  sum_n (-1)^n f_2n+1 (2y/hbar)^2n+1/(2n+1)!.
RealImagParts real_imag_split(const TaylorReconstruction& rec);

struct RescalingReport {
  bool holds = false;
  double max_relative_deviation = 0.0;  // relative to max |rho_N|
};

/// Checks rho_N(x, y; hbar) == rho_N(x, c y; c hbar) on every lattice point.
RescalingReport hbar_rescaling_check(std::span<const GridField> moments,
                                     const SymmetricGrid& y_grid, double hbar, double scale,
                                     double tolerance = 1e-12);

struct ComparisonRegion {
  double x_max = 0.0;  // |x| <= x_max
  double y_max = 0.0;  // |y| <= y_max
};

struct ComparisonReport {
  double sup_error = 0.0;
  double sup_error_real = 0.0;
  double l2_error = 0.0;
  ComparisonRegion region;
  double trace_a = 0.0;
  double trace_b = 0.0;
  double hermiticity_defect = 0.0;
  double diagonal_mismatch = 0.0;
  /// b was bilinearly resampled onto a's lattice.
  bool resampled = false;
  std::size_t cells_compared = 0;
};

/// Compares two density-matrix grids over `region`. If the lattices differ,
/// b is bilinearly resampled onto a's lattice (throws if they do not overlap).
/// The diagonal mismatch is sup |a(x, 0) - f0(x)| when `f0` is given and
/// sup |a(x, 0) - b(x, 0)| otherwise.
ComparisonReport compare(const DensityMatrixGrid& a, const DensityMatrixGrid& b,
                         const ComparisonRegion& region,
                         const std::optional<GridField>& f0 = std::nullopt);

/// sup |rho(x, y) - conj(rho(x, -y))| over the whole lattice.
double hermiticity_defect(const DensityMatrixGrid& rho);

}  // namespace hydrec
