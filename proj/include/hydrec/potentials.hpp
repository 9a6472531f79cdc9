#pragma once

#include <string_view>
#include <vector>

namespace hydrec {

enum class PotentialKind { free, harmonic, quartic, polynomial, paul_trap };

std::string_view to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(std::string_view name);

/// External potential V(x, t), polynomial in x with time-dependent coefficients.
///
/// Every built-in kind is a polynomial in x, so spatial derivatives of any
/// order are exact and vanish beyond the degree:
///   free        V = 0
///   harmonic    V = mass * omega^2 * x^2 / 2
///   quartic     V = c2 * x^2 + c4 * x^4
///   polynomial  V = sum_k c_k(t) x^k,  c_k(t) = sum_l a_{k,l} t^l
///   paul_trap   V = mass * (A + B cos(Omega t)) * x^2 / 2
class PotentialModel {
 public:
  static PotentialModel free_particle();
  static PotentialModel harmonic(double omega, double mass);
  static PotentialModel quartic(double c2, double c4);
  /// `coefficients[k][l]` multiplies t^l x^k.
  static PotentialModel polynomial(std::vector<std::vector<double>> coefficients);
  static PotentialModel paul_trap(double a, double b, double drive_frequency, double mass);

  [[nodiscard]] PotentialKind kind() const { return kind_; }
  /// Kind-specific scalar parameters, in the order of the factory arguments.
  [[nodiscard]] const std::vector<double>& parameters() const { return params_; }
  /// Time-polynomial coefficient table (polynomial kind only).
  [[nodiscard]] const std::vector<std::vector<double>>& coefficient_table() const { return table_; }

  /// Highest power of x that can be nonzero.
  [[nodiscard]] int degree() const;
  /// c_k(t) for k = 0..degree().
  [[nodiscard]] std::vector<double> coefficients_at(double t) const;

  [[nodiscard]] double value(double x, double t) const;
  /// d^order V / dx^order; `order` >= 1.
  [[nodiscard]] double derivative(int order, double x, double t) const;

  bool operator==(const PotentialModel&) const = default;

 private:
  PotentialModel(PotentialKind kind, std::vector<double> params,
                 std::vector<std::vector<double>> table);

  PotentialKind kind_;
  std::vector<double> params_;
  std::vector<std::vector<double>> table_;
};

double potential_value(const PotentialModel& model, double x, double t);
double potential_derivative(const PotentialModel& model, int order, double x, double t);

}  // namespace hydrec
