#include "hydrec/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hydrec {

std::string_view to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::free: return "free";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::quartic: return "quartic";
    case PotentialKind::polynomial: return "polynomial";
    case PotentialKind::paul_trap: return "paul_trap";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(std::string_view name) {
  if (name == "free") return PotentialKind::free;
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "quartic") return PotentialKind::quartic;
  if (name == "polynomial") return PotentialKind::polynomial;
  if (name == "paul_trap") return PotentialKind::paul_trap;
  throw std::invalid_argument("unknown potential kind '" + std::string(name) + "'");
}

PotentialModel::PotentialModel(PotentialKind kind, std::vector<double> params,
                               std::vector<std::vector<double>> table)
    : kind_(kind), params_(std::move(params)), table_(std::move(table)) {
  for (double p : params_) {
    if (!std::isfinite(p)) throw std::invalid_argument("PotentialModel: non-finite parameter");
  }
  for (const auto& row : table_) {
    for (double a : row) {
      if (!std::isfinite(a)) throw std::invalid_argument("PotentialModel: non-finite coefficient");
    }
  }
}

PotentialModel PotentialModel::free_particle() { return {PotentialKind::free, {}, {}}; }

PotentialModel PotentialModel::harmonic(double omega, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("harmonic potential: mass must be positive");
  return {PotentialKind::harmonic, {omega, mass}, {}};
}

PotentialModel PotentialModel::quartic(double c2, double c4) {
  return {PotentialKind::quartic, {c2, c4}, {}};
}

PotentialModel PotentialModel::polynomial(std::vector<std::vector<double>> coefficients) {
  return {PotentialKind::polynomial, {}, std::move(coefficients)};
}

PotentialModel PotentialModel::paul_trap(double a, double b, double drive_frequency, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("paul_trap potential: mass must be positive");
  return {PotentialKind::paul_trap, {a, b, drive_frequency, mass}, {}};
}

int PotentialModel::degree() const {
  switch (kind_) {
    case PotentialKind::free: return 0;
    case PotentialKind::harmonic:
    case PotentialKind::paul_trap: return 2;
    case PotentialKind::quartic: return 4;
    case PotentialKind::polynomial: return static_cast<int>(table_.size()) - 1;
  }
  return 0;
}

std::vector<double> PotentialModel::coefficients_at(double t) const {
  const int deg = degree();
  std::vector<double> c(static_cast<std::size_t>(std::max(deg, 0)) + 1, 0.0);
  switch (kind_) {
    case PotentialKind::free: break;
    case PotentialKind::harmonic: c[2] = 0.5 * params_[1] * params_[0] * params_[0]; break;
    case PotentialKind::quartic:
      c[2] = params_[0];
      c[4] = params_[1];
      break;
    case PotentialKind::paul_trap:
      c[2] = 0.5 * params_[3] * (params_[0] + params_[1] * std::cos(params_[2] * t));
      break;
    case PotentialKind::polynomial:
      for (std::size_t k = 0; k < table_.size(); ++k) {
        double acc = 0.0;
        for (auto it = table_[k].rbegin(); it != table_[k].rend(); ++it) acc = acc * t + *it;
        c[k] = acc;
      }
      break;
  }
  return c;
}

double PotentialModel::value(double x, double t) const {
  const auto c = coefficients_at(t);
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double PotentialModel::derivative(int order, double x, double t) const {
  if (order < 1) throw std::invalid_argument("potential derivative order must be >= 1");
  const int deg = degree();
  if (order > deg) return 0.0;
  const auto c = coefficients_at(t);
  // sum_{k >= order} c_k k!/(k-order)! x^(k-order), by Horner.
  double acc = 0.0;
  for (int k = deg; k >= order; --k) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= static_cast<double>(k - i);
    acc = acc * x + c[static_cast<std::size_t>(k)] * falling;
  }
  return acc;
}

double potential_value(const PotentialModel& model, double x, double t) { return model.value(x, t); }

double potential_derivative(const PotentialModel& model, int order, double x, double t) {
  return model.derivative(order, x, t);
}

}  // namespace hydrec
