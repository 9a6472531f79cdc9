#include "hydrec/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Core>

namespace hydrec {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
  return b;
}

void check_records(std::span<const GridField> records, const TimeNodes& nodes) {
  if (records.size() != nodes.count()) {
    throw std::invalid_argument("reconstruction: one f0 record per time node required");
  }
  for (const GridField& r : records) {
    if (!(r.grid() == records.front().grid())) {
      throw std::invalid_argument("reconstruction: all records must share one spatial grid");
    }
  }
}

std::string insufficient_message(int wanted_order, std::size_t m) {
  std::ostringstream msg;
  msg << "moment f_" << wanted_order << " needs f0 at " << wanted_order + 1
      << " time values (n+1 rule) but only " << m + 1 << " were given";
  return msg.str();
}

// Everything needed to advance one level at every node.
class LevelStepper {
 public:
  LevelStepper(const TimeNodes& nodes, const PotentialModel& model,
               const PhysicalConstants& constants, double edge_tolerance)
      : nodes_(nodes),
        model_(model),
        constants_(constants),
        edge_tolerance_(edge_tolerance),
        d_(differentiation_matrix(nodes)) {}

  // Running integrals of f_n at every node.
  std::vector<GridField> integrate_level(const std::vector<GridField>& level, Diagnostics* diag) {
    std::vector<GridField> out;
    out.reserve(level.size());
    for (const GridField& f : level) out.push_back(cumulative_integral(f, diag, edge_tolerance_));
    return out;
  }

  GridField advance(const MomentLevels& levels, const std::vector<GridField>& integrals,
                    std::size_t node, Diagnostics* diag) {
    const int n = static_cast<int>(levels.size()) - 1;
    const SpatialGrid& grid = integrals.front().grid();
    const std::size_t npts = grid.size();
    const double mass = constants_.mass();
    const double t = nodes_.time(node);

    // -mass * d/dt of the running integral.
    std::vector<double> out(npts, 0.0);
    const auto row = static_cast<Eigen::Index>(node);
    for (std::size_t k = 0; k < integrals.size(); ++k) {
      const double w = d_(row, static_cast<Eigen::Index>(k));
      const auto v = integrals[k].values();
      for (std::size_t i = 0; i < npts; ++i) out[i] += w * v[i];
    }
    for (double& v : out) v *= -mass;

    // Force terms; (hbar/2i)^{2k} = (-1)^k (hbar/2)^{2k} is real.
    const double half_hbar_sq = 0.25 * constants_.hbar() * constants_.hbar();
    double hbar_power = 1.0;
    for (int k = 0; 2 * k + 1 <= n; ++k) {
      const int deriv_order = 2 * k + 1;
      max_potential_order_ = std::max(max_potential_order_, deriv_order);
      const double coeff =
          (k % 2 == 0 ? 1.0 : -1.0) * hbar_power * binomial(n, deriv_order);
      hbar_power *= half_hbar_sq;
      if (coeff == 0.0 || deriv_order > model_.degree()) continue;

      const auto lower = levels[static_cast<std::size_t>(n - deriv_order)][node].values();
      std::vector<double> product(npts);
      for (std::size_t i = 0; i < npts; ++i) {
        product[i] = model_.derivative(deriv_order, grid.point(i), t) * lower[i];
      }
      const GridField running = cumulative_integral(GridField(grid, std::move(product)), diag,
                                                    edge_tolerance_);
      const auto rv = running.values();
      for (std::size_t i = 0; i < npts; ++i) out[i] -= mass * coeff * rv[i];
    }
    if (close_tails_) {
      // Moments vanish at both ends; a nonzero right-edge value is accumulated
      // error. Remove it with the node's cumulative probability as the ramp.
      const GridField ramp_field = cumulative_integral(levels.front()[node]);
      const auto ramp = ramp_field.values();
      const double total = ramp.back();
      const double residual = out.back();
      if (total > 0.0) {
        for (std::size_t i = 0; i < npts; ++i) out[i] -= residual * ramp[i] / total;
      }
    }
    return {grid, std::move(out)};
  }

  void set_close_tails(bool on) { close_tails_ = on; }

  [[nodiscard]] int max_potential_order() const { return max_potential_order_; }

 private:
  const TimeNodes& nodes_;
  const PotentialModel& model_;
  const PhysicalConstants& constants_;
  double edge_tolerance_;
  Eigen::MatrixXd d_;
  int max_potential_order_ = 0;
  bool close_tails_ = false;
};

// Collapses per-node decay warnings of one level into a single message.
void summarize_level(Diagnostics& into, const Diagnostics& level, int order) {
  if (level.empty()) return;
  std::ostringstream msg;
  msg << "order " << order << ": " << level.warnings().size()
      << " running integral(s) flagged: " << level.warnings().front();
  into.warn(msg.str());
}

}  // namespace

MomentPyramid::MomentPyramid(TimeNodes nodes, MomentLevels levels, int max_potential_order,
                             Diagnostics diag)
    : nodes_(nodes),
      levels_(std::move(levels)),
      max_potential_order_(max_potential_order),
      diag_(std::move(diag)) {
  if (levels_.empty()) throw std::invalid_argument("MomentPyramid: no levels");
  for (const auto& level : levels_) {
    if (level.size() != nodes_.count()) {
      throw std::invalid_argument("MomentPyramid: every level needs one field per node");
    }
  }
}

const GridField& MomentPyramid::at(int order, std::size_t node) const {
  if (order < 0 || order > max_order() || node >= nodes_.count()) {
    throw std::out_of_range("MomentPyramid::at: order or node out of range");
  }
  return levels_[static_cast<std::size_t>(order)][node];
}

std::vector<MomentField> MomentPyramid::slice(std::optional<std::size_t> node) const {
  const std::size_t j = node.value_or(central_index());
  if (j >= nodes_.count()) throw std::out_of_range("MomentPyramid::slice: node out of range");
  std::vector<MomentField> out;
  for (int n = 0; n <= max_order(); ++n) out.push_back({n, j, at(n, j)});
  return out;
}

MomentField next_moment(const MomentLevels& levels, const TimeNodes& nodes,
                        const PotentialModel& model, const PhysicalConstants& constants,
                        std::size_t node, Diagnostics* diag) {
  if (levels.empty()) throw std::invalid_argument("next_moment: no input levels");
  const int n = static_cast<int>(levels.size()) - 1;
  if (static_cast<std::size_t>(n + 1) > nodes.m()) {
    throw InsufficientSamplesError(insufficient_message(n + 1, nodes.m()));
  }
  if (node >= nodes.count()) throw std::out_of_range("next_moment: node out of range");
  for (const auto& level : levels) {
    if (level.size() != nodes.count()) {
      throw std::invalid_argument("next_moment: every level needs f_n at all nodes");
    }
  }
  LevelStepper stepper(nodes, model, constants, kDefaultEdgeTolerance);
  const auto integrals = stepper.integrate_level(levels.back(), diag);
  return {n + 1, node, stepper.advance(levels, integrals, node, diag)};
}

MomentPyramid build_pyramid(std::span<const GridField> f0_records, const TimeNodes& nodes,
                            const PotentialModel& model, const PhysicalConstants& constants,
                            int target_order, const ReconstructionOptions& options) {
  check_records(f0_records, nodes);
  if (target_order < 0) throw std::invalid_argument("build_pyramid: order must be >= 0");
  if (static_cast<std::size_t>(target_order) > nodes.m()) {
    throw InsufficientSamplesError(insufficient_message(target_order, nodes.m()));
  }

  Diagnostics diag;
  if (nodes.count() > kRungeWarningNodes) {
    diag.warn("build_pyramid: more than 12 equispaced nodes; high-order time derivatives are "
              "noise-amplified, prefer a shorter total time window");
  }

  std::vector<GridField> base;
  base.reserve(f0_records.size());
  for (const GridField& r : f0_records) {
    base.push_back(options.smoothing
                       ? smooth_local_poly(r, options.smoothing->window, options.smoothing->degree)
                       : r);
  }
  double most_negative = 0.0;
  double peak = 0.0;
  for (const GridField& f : base) {
    for (double v : f.values()) {
      most_negative = std::min(most_negative, v);
      peak = std::max(peak, v);
    }
  }
  if (peak > 0.0 && most_negative < -1e-10 * peak) {
    diag.warn("build_pyramid: f0 has negative samples below the noise floor");
  }

  MomentLevels levels;
  levels.push_back(std::move(base));
  LevelStepper stepper(nodes, model, constants, options.edge_tolerance);
  stepper.set_close_tails(options.close_tails);
  for (int n = 0; n < target_order; ++n) {
    Diagnostics level_diag;
    const auto integrals = stepper.integrate_level(levels.back(), &level_diag);
    std::vector<GridField> next;
    next.reserve(nodes.count());
    for (std::size_t j = 0; j < nodes.count(); ++j) {
      next.push_back(stepper.advance(levels, integrals, j, &level_diag));
    }
    summarize_level(diag, level_diag, n);
    levels.push_back(std::move(next));
  }
  return {nodes, std::move(levels), stepper.max_potential_order(), std::move(diag)};
}

MomentField reconstruct_current(std::span<const GridField> f0_records, const TimeNodes& nodes,
                                const PhysicalConstants& constants, std::size_t node,
                                Diagnostics* diag) {
  check_records(f0_records, nodes);
  MomentLevels levels{std::vector<GridField>(f0_records.begin(), f0_records.end())};
  return next_moment(levels, nodes, PotentialModel::free_particle(), constants, node, diag);
}

namespace {

// d_t f0 at `node` via the differentiation matrix.
std::vector<double> time_rate(std::span<const GridField> f0_records, const TimeNodes& nodes,
                              std::size_t node) {
  const Eigen::MatrixXd d = differentiation_matrix(nodes);
  std::vector<double> rate(f0_records.front().size(), 0.0);
  for (std::size_t k = 0; k < f0_records.size(); ++k) {
    const double w = d(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(k));
    const auto v = f0_records[k].values();
    for (std::size_t i = 0; i < rate.size(); ++i) rate[i] += w * v[i];
  }
  return rate;
}

ContinuityResidual summarize(const std::vector<double>& rate, const std::vector<double>& defect) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < rate.size(); ++i) {
    num += defect[i] * defect[i];
    den += rate[i] * rate[i];
  }
  ContinuityResidual r;
  r.defect_l2 = std::sqrt(num);
  r.rate_l2 = std::sqrt(den);
  r.relative_l2 = den > 0.0 ? r.defect_l2 / r.rate_l2 : r.defect_l2;
  return r;
}

}  // namespace

ContinuityResidual continuity_residual(std::span<const GridField> f0_records,
                                       const TimeNodes& nodes, const PhysicalConstants& constants,
                                       std::size_t node) {
  const MomentField current = reconstruct_current(f0_records, nodes, constants, node);
  const auto rate_nodes = time_rate(f0_records, nodes, node);
  const auto f1 = current.field.values();
  const double dx = current.field.grid().spacing();
  std::vector<double> rate(rate_nodes.size() - 1);
  std::vector<double> defect(rate.size());
  for (std::size_t i = 0; i + 1 < rate_nodes.size(); ++i) {
    rate[i] = 0.5 * (rate_nodes[i] + rate_nodes[i + 1]);
    defect[i] = rate[i] + (f1[i + 1] - f1[i]) / (dx * constants.mass());
  }
  return summarize(rate, defect);
}

ContinuityResidual continuity_residual_collocated(std::span<const GridField> f0_records,
                                                  const TimeNodes& nodes,
                                                  const PhysicalConstants& constants,
                                                  std::size_t node) {
  const MomentField current = reconstruct_current(f0_records, nodes, constants, node);
  const auto rate_nodes = time_rate(f0_records, nodes, node);
  const auto f1 = current.field.values();
  const double dx = current.field.grid().spacing();
  const std::size_t n = rate_nodes.size();
  std::vector<double> rate(rate_nodes.begin() + 1, rate_nodes.end() - 1);
  std::vector<double> defect(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    defect[i - 1] = rate_nodes[i] + (f1[i + 1] - f1[i - 1]) / (2.0 * dx * constants.mass());
  }
  return summarize(rate, defect);
}

}  // namespace hydrec
