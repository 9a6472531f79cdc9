#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hydrec/diagnostics.hpp"
#include "hydrec/numerics.hpp"
#include "hydrec/potentials.hpp"

namespace hydrec {

using Complex = std::complex<double>;

/// Sampled wavefunction. The norm int |psi|^2 dx is carried, never forced to 1.
class WaveFunction {
 public:
  WaveFunction(SpatialGrid grid, std::vector<Complex> amplitudes);

  [[nodiscard]] const SpatialGrid& grid() const { return grid_; }
  [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
  [[nodiscard]] double norm() const { return norm_; }

  bool operator==(const WaveFunction&) const = default;

 private:
  SpatialGrid grid_;
  std::vector<Complex> amplitudes_;
  double norm_;
};

/// Superposition of two counter-propagating Gaussians,
/// psi(x) = exp(-(x/2 sigma)^2) * 2 cos(k0 x), left unnormalized.
struct CatStateParams {
  double sigma = 0.70710678118654752;  // 1/sqrt(2)
  double k0 = 2.8284271247461901;      // 2 sqrt(2)
};

/// Density matrix rho(x+y, x-y) on an (x, y) lattice; rows are x, columns y.
struct DensityMatrixGrid {
  SpatialGrid x_grid;
  SymmetricGrid y_grid;
  Eigen::MatrixXcd values;
  /// Cells whose arguments x +- y fell outside the wavefunction grid (set to 0).
  std::size_t extrapolated_cells = 0;
};

/// Wigner distribution W(x, p) on an x lattice times a symmetric p lattice.
struct WignerGrid {
  SpatialGrid x_grid;
  SymmetricGrid p_grid;
  Eigen::MatrixXd values;
  /// max |Im W| / max |W| left over by the discrete transform.
  double imaginary_residue = 0.0;
};

WaveFunction make_cat_state(const CatStateParams& params, const SpatialGrid& grid,
                            Diagnostics* diag = nullptr);

/// exp(-((x - x0)/2 sigma)^2 + i k0 x): a Gaussian at its waist with mean momentum hbar k0.
WaveFunction make_gaussian_state(double sigma, double x0, double k0, const SpatialGrid& grid);

/// Harmonic-oscillator coherent state centered at (x0, p0), width sigma^2 = hbar/(2 mass omega).
WaveFunction make_coherent_state(double omega, double x0, double p0,
                                 const PhysicalConstants& constants, const SpatialGrid& grid);

/// |psi(x)|^2.
GridField probability_density(const WaveFunction& psi);

/// psi(x+y) conj(psi(x-y)) on the wavefunction's x grid. Off-lattice arguments
/// are linearly interpolated; arguments beyond the grid count as zero and are
/// tallied in `extrapolated_cells` (with a warning if psi has not decayed there).
DensityMatrixGrid exact_density_matrix(const WaveFunction& psi, const SymmetricGrid& y_grid,
                                       Diagnostics* diag = nullptr);

/// Closed-form cat-state density matrix
/// 2 exp(-(x^2+y^2)/2 sigma^2) [cos(2 k0 x) + cos(2 k0 y)].
DensityMatrixGrid analytic_cat_density_matrix(const CatStateParams& params,
                                              const SpatialGrid& x_grid,
                                              const SymmetricGrid& y_grid);

struct PropagationOptions {
  double norm_tolerance = 1e-10;  // per-step relative norm drift
  double edge_tolerance = 1e-8;   // edge |psi| relative to max |psi|
};

/// Second-order split-operator evolution by `steps` steps of size `dt`
/// (negative dt evolves backward). The potential is sampled at each step's
/// midpoint time. Throws SimulationQualityError on norm drift or when the
/// packet reaches the periodic grid edge.
WaveFunction propagate(const WaveFunction& psi, const PotentialModel& model,
                       const PhysicalConstants& constants, double dt, std::size_t steps,
                       double t_start = 0.0, const PropagationOptions& options = {});

/// States at every node time, starting from `initial` at t = 0. Each node
/// interval is split into `substeps` propagation steps; reaching a nonzero
/// t0 uses steps no larger than dt/substeps.
std::vector<WaveFunction> evolve_to_nodes(const WaveFunction& initial, const PotentialModel& model,
                                          const PhysicalConstants& constants,
                                          const TimeNodes& nodes, std::size_t substeps,
                                          const PropagationOptions& options = {});

/// Fraction of max |psi| found in the outermost samples on either side.
double edge_amplitude_ratio(const WaveFunction& psi);

/// Largest |p| at which the momentum density |psi~(p)|^2 exceeds
/// rel_tol * its maximum.
double momentum_extent(const WaveFunction& psi, const PhysicalConstants& constants,
                       double rel_tol = 1e-16);

/// W(x, p) = (1/pi hbar) int dy exp(-2ipy/hbar) rho(x+y, x-y) by discrete
/// Fourier transform over the y lattice. The p lattice has 2J+1 points with
/// spacing pi hbar / ((2J+1) dy), i.e. the Nyquist range of the y lattice.
WignerGrid wigner_transform(const DensityMatrixGrid& rho, const PhysicalConstants& constants,
                            Diagnostics* diag = nullptr);

/// Wigner distribution of a pure state on an automatically chosen lattice:
/// y spacing is an integer multiple of dx (so x +- y stays on grid nodes) and
/// the p range covers momentum_extent(psi) with margin.
WignerGrid wigner_of(const WaveFunction& psi, const PhysicalConstants& constants,
                     Diagnostics* diag = nullptr);

/// f_n(x) = int p^n W(x, p) dp by the trapezoidal rule over the p lattice.
GridField oracle_moments(const WignerGrid& wigner, int order, Diagnostics* diag = nullptr);

/// Convenience: oracle_moments(wigner_of(psi)).
GridField oracle_moments(const WaveFunction& psi, int order, const PhysicalConstants& constants,
                         Diagnostics* diag = nullptr);

/// Closed-form moment of the cat state, f_n = (hbar/2i)^n d^n rho / dy^n at y = 0.
/// Odd orders vanish.
GridField analytic_cat_moment(const CatStateParams& params, int order,
                              const PhysicalConstants& constants, const SpatialGrid& grid);

/// Warns when the y spacing is too coarse for cat-state oracles:
/// hbar/(2 dy) should be at least 4 (k0 hbar + hbar/sigma).
bool check_cat_y_spacing(const CatStateParams& params, double y_spacing,
                         const PhysicalConstants& constants, Diagnostics* diag = nullptr);

}  // namespace hydrec
