#pragma once

// Derivative round trip shared by the assembly tests and the acceptance suite:
// (hbar/2i)^n d^n rho_N/dy^n at y = 0, taken by finite differences of the
// assembled surface, should give back f_n.

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "hydrec/assembly.hpp"
#include "support.hpp"

namespace hydrec::testing {

struct RoundTrip {
  double relative_l2 = std::numeric_limits<double>::infinity();
  double step = 0.0;
};

/// Best relative L2 error over a sweep of stencil steps (13-point central stencil).
inline RoundTrip derivative_round_trip(std::span<const GridField> moments, int n, double hbar) {
  constexpr std::size_t kHalf = 6;
  const SpatialGrid& x = moments.front().grid();
  const Complex factor = std::pow(Complex(0.0, -0.5 * hbar), n);
  RoundTrip best;
  for (double h : {0.2, 0.1, 0.05, 0.03, 0.02, 0.01, 0.005, 0.002}) {
    const SymmetricGrid y = SymmetricGrid::from_spacing(h * hbar, kHalf);
    const TaylorReconstruction rec = assemble(moments, y, hbar);
    std::vector<double> nodes;
    for (std::size_t j = 0; j < y.size(); ++j) nodes.push_back(y.point(j));
    const auto w = fornberg_weights(0.0, nodes, n);
    std::vector<double> got(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      Complex d = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        d += w[static_cast<std::size_t>(n)][j] *
             rec.values.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      got[i] = (factor * d).real();
    }
    const double err = relative_l2(got, moments[static_cast<std::size_t>(n)].values());
    if (err < best.relative_l2) best = {err, h * hbar};
  }
  return best;
}

}  // namespace hydrec::testing
