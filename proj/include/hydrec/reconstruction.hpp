#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hydrec/diagnostics.hpp"
#include "hydrec/numerics.hpp"
#include "hydrec/potentials.hpp"

namespace hydrec {

/// Moment f_n(x, t_j) = int p^n W(x, p, t_j) dp at one time node.
struct MomentField {
  int order = 0;
  std::size_t time_node = 0;
  GridField field;
};

/// Levels[n][j] holds f_n at time node j.
using MomentLevels = std::vector<std::vector<GridField>>;

struct SmoothingSpec {
  std::size_t window = 1;
  std::size_t degree = 0;
};

struct ReconstructionOptions {
  /// Applied to the measured f0 records only, before the recursion.
  std::optional<SmoothingSpec> smoothing;
  double edge_tolerance = kDefaultEdgeTolerance;
  /// Subtract the right-edge residual of each new moment, spread in proportion
  /// to the cumulative probability, so every f_n vanishes at both grid ends.
  bool close_tails = true;
};

/// Above this many nodes, equispaced Lagrange differentiation amplifies noise
/// strongly; build_pyramid warns.
inline constexpr std::size_t kRungeWarningNodes = 12;

/// All moments f_0..f_N at every time node, computed from measured f_0.
class MomentPyramid {
 public:
  MomentPyramid(TimeNodes nodes, MomentLevels levels, int max_potential_order, Diagnostics diag);

  [[nodiscard]] const TimeNodes& nodes() const { return nodes_; }
  [[nodiscard]] int max_order() const { return static_cast<int>(levels_.size()) - 1; }
  [[nodiscard]] const GridField& at(int order, std::size_t node) const;
  [[nodiscard]] const MomentLevels& levels() const { return levels_; }

  [[nodiscard]] std::size_t central_index() const { return nodes_.central_index(); }
  [[nodiscard]] double central_time() const { return nodes_.time(central_index()); }
  /// f_0..f_N at `node` (the central node by default).
  [[nodiscard]] std::vector<MomentField> slice(std::optional<std::size_t> node = {}) const;

  /// Highest spatial derivative order of V the recursion asked for (0 if none).
  [[nodiscard]] int max_potential_order() const { return max_potential_order_; }
  [[nodiscard]] const Diagnostics& diagnostics() const { return diag_; }

 private:
  TimeNodes nodes_;
  MomentLevels levels_;
  int max_potential_order_;
  Diagnostics diag_;
};

/// f_{n+1} at time node `node` from f_0..f_n (n = levels.size() - 1), each
/// known at every node:
///
///   f_{n+1}(x,t) = -mass d/dt int_{-inf}^x f_n
///                  - mass sum_{k=0}^{[(n-1)/2]} (-1)^k (hbar/2)^{2k} binom(n, 2k+1)
///                         int_{-inf}^x (d^{2k+1}V/dx^{2k+1}) f_{n-2k-1}
///
/// The time derivative uses the Lagrange differentiation matrix of `nodes`.
/// No tail closure is applied, so the result is exactly linear in the inputs.
/// Throws InsufficientSamplesError when n+1 > m.
MomentField next_moment(const MomentLevels& levels, const TimeNodes& nodes,
                        const PotentialModel& model, const PhysicalConstants& constants,
                        std::size_t node, Diagnostics* diag = nullptr);

/// Runs the recursion up to `target_order` from f_0 measured at every node.
/// Requires target_order <= m: f_n needs f_0 at n+1 distinct times.
MomentPyramid build_pyramid(std::span<const GridField> f0_records, const TimeNodes& nodes,
                            const PotentialModel& model, const PhysicalConstants& constants,
                            int target_order, const ReconstructionOptions& options = {});

/// f_1 = -mass d/dt int_{-inf}^x f_0 at `node`; the potential never enters.
MomentField reconstruct_current(std::span<const GridField> f0_records, const TimeNodes& nodes,
                                const PhysicalConstants& constants, std::size_t node,
                                Diagnostics* diag = nullptr);

struct ContinuityResidual {
  double relative_l2 = 0.0;  // ||d_t f0 + (1/mass) d_x f1|| / ||d_t f0||
  double defect_l2 = 0.0;
  double rate_l2 = 0.0;
};

/// Continuity-equation check at `node` with f_1 from reconstruct_current.
/// d_x f_1 is the two-point central difference on the midpoints between grid
/// nodes, where d_t f_0 is taken as the average of its two neighbours.
ContinuityResidual continuity_residual(std::span<const GridField> f0_records,
                                       const TimeNodes& nodes, const PhysicalConstants& constants,
                                       std::size_t node);

/// Same check with the collocated central difference (f1[j+1] - f1[j-1]) / 2dx
/// on grid nodes; carries the O(dx^2) mismatch between that stencil and the
/// trapezoidal running integral.
ContinuityResidual continuity_residual_collocated(std::span<const GridField> f0_records,
                                                  const TimeNodes& nodes,
                                                  const PhysicalConstants& constants,
                                                  std::size_t node);

}  // namespace hydrec
