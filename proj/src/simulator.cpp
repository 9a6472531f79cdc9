#include "hydrec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "parallel.hpp"

namespace hydrec {

namespace {

double trapezoid_norm(const SpatialGrid& grid, std::span<const Complex> psi) {
  double sum = 0.5 * (std::norm(psi.front()) + std::norm(psi.back()));
  for (std::size_t j = 1; j + 1 < psi.size(); ++j) sum += std::norm(psi[j]);
  return sum * grid.spacing();
}

// Signed DFT wavenumber of bin j for an n-point grid of spacing dx.
double wavenumber(std::size_t j, std::size_t n, double dx) {
  const auto sj = static_cast<double>(j);
  const auto sn = static_cast<double>(n);
  const double idx = (j <= n / 2) ? sj : sj - sn;
  return 2.0 * std::numbers::pi * idx / (sn * dx);
}

// psi at an arbitrary position; zero outside the grid, linear in between nodes.
Complex sample(const WaveFunction& psi, double x, bool& outside) {
  const SpatialGrid& g = psi.grid();
  const double u = (x - g.x_min()) / g.spacing();
  const double last = static_cast<double>(g.size() - 1);
  const double nearest = std::round(u);
  if (std::abs(u - nearest) < 1e-9) {
    if (nearest < 0.0 || nearest > last) {
      outside = true;
      return {0.0, 0.0};
    }
    return psi.amplitudes()[static_cast<std::size_t>(nearest)];
  }
  if (u < 0.0 || u > last) {
    outside = true;
    return {0.0, 0.0};
  }
  const auto lo = static_cast<std::size_t>(std::floor(u));
  const double frac = u - static_cast<double>(lo);
  const auto amps = psi.amplitudes();
  return (1.0 - frac) * amps[lo] + frac * amps[lo + 1];
}

}  // namespace

WaveFunction::WaveFunction(SpatialGrid grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)), norm_(0.0) {
  if (amplitudes_.size() != grid_.size()) {
    throw std::invalid_argument("WaveFunction: amplitude count does not match grid");
  }
  for (const Complex& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("WaveFunction: non-finite amplitude");
    }
  }
  norm_ = trapezoid_norm(grid_, amplitudes_);
}

WaveFunction make_cat_state(const CatStateParams& params, const SpatialGrid& grid,
                            Diagnostics* diag) {
  if (!(params.sigma > 0.0)) throw std::invalid_argument("make_cat_state: sigma must be positive");
  const double reach = std::min(-grid.x_min(), grid.x_max());
  if (reach < 4.0 * params.sigma) {
    throw std::invalid_argument("make_cat_state: grid must span at least +-4 sigma");
  }
  if (reach < 6.0 * params.sigma) {
    warn(diag, "make_cat_state: grid spans less than +-6 sigma; oracle accuracy reduced");
  }
  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    const double envelope = std::exp(-(x / (2.0 * params.sigma)) * (x / (2.0 * params.sigma)));
    amps[j] = envelope * 2.0 * std::cos(params.k0 * x);
  }
  return {grid, std::move(amps)};
}

WaveFunction make_gaussian_state(double sigma, double x0, double k0, const SpatialGrid& grid) {
  if (!(sigma > 0.0)) throw std::invalid_argument("make_gaussian_state: sigma must be positive");
  std::vector<Complex> amps(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    const double u = (x - x0) / (2.0 * sigma);
    amps[j] = std::exp(-u * u) * std::polar(1.0, k0 * x);
  }
  return {grid, std::move(amps)};
}

WaveFunction make_coherent_state(double omega, double x0, double p0,
                                 const PhysicalConstants& constants, const SpatialGrid& grid) {
  if (!(omega > 0.0)) throw std::invalid_argument("make_coherent_state: omega must be positive");
  const double sigma = std::sqrt(constants.hbar() / (2.0 * constants.mass() * omega));
  return make_gaussian_state(sigma, x0, p0 / constants.hbar(), grid);
}

GridField probability_density(const WaveFunction& psi) {
  std::vector<double> f(psi.amplitudes().size());
  std::transform(psi.amplitudes().begin(), psi.amplitudes().end(), f.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return {psi.grid(), std::move(f)};
}

double edge_amplitude_ratio(const WaveFunction& psi) {
  const auto amps = psi.amplitudes();
  const std::size_t n = amps.size();
  const std::size_t band = std::max<std::size_t>(1, n / 64);
  double peak = 0.0;
  for (const Complex& a : amps) peak = std::max(peak, std::abs(a));
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    edge = std::max({edge, std::abs(amps[i]), std::abs(amps[n - 1 - i])});
  }
  return edge / peak;
}

DensityMatrixGrid exact_density_matrix(const WaveFunction& psi, const SymmetricGrid& y_grid,
                                       Diagnostics* diag) {
  const SpatialGrid& xg = psi.grid();
  const auto nx = static_cast<Eigen::Index>(xg.size());
  const auto ny = static_cast<Eigen::Index>(y_grid.size());
  DensityMatrixGrid rho{xg, y_grid, Eigen::MatrixXcd(nx, ny), 0};
  std::vector<std::size_t> outside_per_row(xg.size(), 0);

  detail::parallel_for(xg.size(), [&](std::size_t i) {
    const double x = xg.point(i);
    std::size_t outside_count = 0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double y = y_grid.point(static_cast<std::size_t>(j));
      bool outside = false;
      const Complex plus = sample(psi, x + y, outside);
      const Complex minus = sample(psi, x - y, outside);
      if (outside) ++outside_count;
      rho.values(static_cast<Eigen::Index>(i), j) = plus * std::conj(minus);
    }
    outside_per_row[i] = outside_count;
  });

  for (std::size_t c : outside_per_row) rho.extrapolated_cells += c;
  if (rho.extrapolated_cells > 0 && edge_amplitude_ratio(psi) > kDefaultEdgeTolerance) {
    std::ostringstream msg;
    msg << "exact_density_matrix: " << rho.extrapolated_cells
        << " cells reach beyond the grid while psi has not decayed at its edge";
    warn(diag, msg.str());
  }
  return rho;
}

DensityMatrixGrid analytic_cat_density_matrix(const CatStateParams& params,
                                              const SpatialGrid& x_grid,
                                              const SymmetricGrid& y_grid) {
  const auto nx = static_cast<Eigen::Index>(x_grid.size());
  const auto ny = static_cast<Eigen::Index>(y_grid.size());
  DensityMatrixGrid rho{x_grid, y_grid, Eigen::MatrixXcd(nx, ny), 0};
  const double two_var = 2.0 * params.sigma * params.sigma;
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double x = x_grid.point(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double y = y_grid.point(static_cast<std::size_t>(j));
      const double value = 2.0 * std::exp(-(x * x + y * y) / two_var) *
                           (std::cos(2.0 * params.k0 * x) + std::cos(2.0 * params.k0 * y));
      rho.values(i, j) = Complex(value, 0.0);
    }
  }
  return rho;
}

WaveFunction propagate(const WaveFunction& psi, const PotentialModel& model,
                       const PhysicalConstants& constants, double dt, std::size_t steps,
                       double t_start, const PropagationOptions& options) {
  if (steps == 0) return psi;
  if (!std::isfinite(dt) || dt == 0.0) throw std::invalid_argument("propagate: dt must be nonzero");

  const SpatialGrid& grid = psi.grid();
  const std::size_t n = grid.size();
  const double dx = grid.spacing();
  const double hbar = constants.hbar();
  detail::Fft fft(n);

  // exp(-i hbar k^2 dt / (4 mass)) for a kinetic half step; includes 1/n normalization.
  std::vector<Complex> kinetic_half(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double k = wavenumber(j, n, dx);
    kinetic_half[j] =
        std::polar(1.0 / static_cast<double>(n), -hbar * k * k * dt / (4.0 * constants.mass()));
  }
  const bool has_potential = model.kind() != PotentialKind::free;
  const bool time_dependent = model.kind() == PotentialKind::paul_trap ||
                              model.kind() == PotentialKind::polynomial;
  std::vector<Complex> potential_phase(n, Complex(1.0, 0.0));
  auto fill_potential = [&](double t_mid) {
    for (std::size_t j = 0; j < n; ++j) {
      potential_phase[j] = std::polar(1.0, -model.value(grid.point(j), t_mid) * dt / hbar);
    }
  };
  if (has_potential && !time_dependent) fill_potential(t_start);

  std::vector<Complex> buf(psi.amplitudes().begin(), psi.amplitudes().end());
  double previous_norm = trapezoid_norm(grid, buf);

  for (std::size_t step = 0; step < steps; ++step) {
    fft.forward(buf.data());
    for (std::size_t j = 0; j < n; ++j) buf[j] *= kinetic_half[j];
    fft.backward(buf.data());

    if (has_potential) {
      if (time_dependent) fill_potential(t_start + (static_cast<double>(step) + 0.5) * dt);
      for (std::size_t j = 0; j < n; ++j) buf[j] *= potential_phase[j];
    }

    fft.forward(buf.data());
    for (std::size_t j = 0; j < n; ++j) buf[j] *= kinetic_half[j];
    fft.backward(buf.data());

    const double current_norm = trapezoid_norm(grid, buf);
    if (!std::isfinite(current_norm) ||
        std::abs(current_norm - previous_norm) > options.norm_tolerance * previous_norm) {
      std::ostringstream msg;
      msg << "propagate: norm drift " << std::abs(current_norm - previous_norm) / previous_norm
          << " at step " << step << " exceeds tolerance; refine grid or time step";
      throw SimulationQualityError(msg.str());
    }
    previous_norm = current_norm;

    double peak = 0.0;
    for (const Complex& a : buf) peak = std::max(peak, std::abs(a));
    const std::size_t band = std::max<std::size_t>(1, n / 64);
    double edge = 0.0;
    for (std::size_t i = 0; i < band; ++i) {
      edge = std::max({edge, std::abs(buf[i]), std::abs(buf[n - 1 - i])});
    }
    if (edge > options.edge_tolerance * peak) {
      std::ostringstream msg;
      msg << "propagate: wrap-around, edge amplitude " << edge / peak << " of max at step "
          << step << " (grid too small for the evolution time)";
      throw SimulationQualityError(msg.str());
    }
  }
  return {grid, std::move(buf)};
}

std::vector<WaveFunction> evolve_to_nodes(const WaveFunction& initial, const PotentialModel& model,
                                          const PhysicalConstants& constants,
                                          const TimeNodes& nodes, std::size_t substeps,
                                          const PropagationOptions& options) {
  if (substeps == 0) throw std::invalid_argument("evolve_to_nodes: substeps must be >= 1");
  const double step = nodes.dt() / static_cast<double>(substeps);
  WaveFunction current = initial;
  if (nodes.t0() != 0.0) {
    const auto lead = static_cast<std::size_t>(std::ceil(std::abs(nodes.t0()) / step - 1e-9));
    current = propagate(current, model, constants, nodes.t0() / static_cast<double>(lead), lead,
                        0.0, options);
  }
  std::vector<WaveFunction> states;
  states.reserve(nodes.count());
  states.push_back(current);
  for (std::size_t j = 1; j < nodes.count(); ++j) {
    current = propagate(current, model, constants, step, substeps, nodes.time(j - 1), options);
    states.push_back(current);
  }
  return states;
}

double momentum_extent(const WaveFunction& psi, const PhysicalConstants& constants,
                       double rel_tol) {
  const std::size_t n = psi.grid().size();
  detail::Fft fft(n);
  std::vector<Complex> buf(psi.amplitudes().begin(), psi.amplitudes().end());
  fft.forward(buf.data());
  double peak = 0.0;
  for (const Complex& a : buf) peak = std::max(peak, std::norm(a));
  double extent = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::norm(buf[j]) > rel_tol * peak) {
      extent = std::max(extent, std::abs(wavenumber(j, n, psi.grid().spacing())));
    }
  }
  return constants.hbar() * extent;
}

WignerGrid wigner_transform(const DensityMatrixGrid& rho, const PhysicalConstants& constants,
                            Diagnostics* diag) {
  const SymmetricGrid& yg = rho.y_grid;
  const std::size_t ny = yg.size();
  const std::size_t half = yg.half_count();
  if (half == 0) throw std::invalid_argument("wigner_transform: y lattice needs more than one point");
  const double hbar = constants.hbar();
  const double dy = yg.spacing();
  const double dp = std::numbers::pi * hbar / (static_cast<double>(ny) * dy);
  const SymmetricGrid p_grid = SymmetricGrid::from_spacing(dp, half);

  const std::size_t nx = rho.x_grid.size();
  WignerGrid w{rho.x_grid, p_grid,
               Eigen::MatrixXd(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny)), 0.0};
  std::vector<double> row_imag(nx, 0.0);
  std::vector<double> row_peak(nx, 0.0);
  const double scale = dy / (std::numbers::pi * hbar);
  detail::Fft fft(ny);

  detail::parallel_for(nx, [&](std::size_t i) {
    std::vector<Complex> buf(ny);
    const auto row = static_cast<Eigen::Index>(i);
    // Offset y index s = j - J is stored at position s mod ny.
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t pos = (j + ny - half) % ny;
      buf[pos] = rho.values(row, static_cast<Eigen::Index>(j));
    }
    fft.forward(buf.data());
    double imag = 0.0;
    double peak = 0.0;
    for (std::size_t k = 0; k < ny; ++k) {
      const std::size_t pos = (k + ny - half) % ny;
      const Complex v = scale * buf[pos];
      w.values(row, static_cast<Eigen::Index>(k)) = v.real();
      imag = std::max(imag, std::abs(v.imag()));
      peak = std::max(peak, std::abs(v.real()));
    }
    row_imag[i] = imag;
    row_peak[i] = peak;
  });

  const double peak = *std::max_element(row_peak.begin(), row_peak.end());
  const double imag = *std::max_element(row_imag.begin(), row_imag.end());
  w.imaginary_residue = peak > 0.0 ? imag / peak : 0.0;
  if (w.imaginary_residue > 1e-8) {
    std::ostringstream msg;
    msg << "wigner_transform: relative imaginary residue " << w.imaginary_residue
        << " (density matrix not Hermitian on this lattice?)";
    warn(diag, msg.str());
  }
  if (peak > 0.0) {
    const auto last = static_cast<Eigen::Index>(ny - 1);
    const double edge = std::max(w.values.col(0).cwiseAbs().maxCoeff(),
                                 w.values.col(last).cwiseAbs().maxCoeff());
    if (edge > 1e-10 * peak) {
      warn(diag, "wigner_transform: W has not decayed at the momentum-lattice edge");
    }
  }
  return w;
}

WignerGrid wigner_of(const WaveFunction& psi, const PhysicalConstants& constants,
                     Diagnostics* diag) {
  const SpatialGrid& grid = psi.grid();
  const double dx = grid.spacing();
  const double target = std::max(1.5 * momentum_extent(psi, constants),
                                 std::numbers::pi * constants.hbar() / (grid.x_max() - grid.x_min()));
  const auto stride = static_cast<std::size_t>(
      std::max(1.0, std::floor(std::numbers::pi * constants.hbar() / (2.0 * dx * target))));
  const std::size_t half = (grid.size() - 1) / (2 * stride);
  const SymmetricGrid y_grid = SymmetricGrid::from_spacing(static_cast<double>(stride) * dx, half);
  return wigner_transform(exact_density_matrix(psi, y_grid, diag), constants, diag);
}

GridField oracle_moments(const WignerGrid& wigner, int order, Diagnostics* diag) {
  if (order < 0) throw std::invalid_argument("oracle_moments: order must be >= 0");
  const std::size_t np = wigner.p_grid.size();
  const double dp = wigner.p_grid.spacing();
  std::vector<double> weight(np);
  for (std::size_t k = 0; k < np; ++k) {
    const double p = wigner.p_grid.point(k);
    double pn = 1.0;
    for (int i = 0; i < order; ++i) pn *= p;
    weight[k] = pn * dp * ((k == 0 || k + 1 == np) ? 0.5 : 1.0);
  }
  const std::size_t nx = wigner.x_grid.size();
  std::vector<double> f(nx);
  double integrand_peak = 0.0;
  double integrand_edge = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
      const double term = weight[k] * wigner.values(row, static_cast<Eigen::Index>(k));
      acc += term;
      integrand_peak = std::max(integrand_peak, std::abs(term));
    }
    // Edge weights carry the trapezoid's 1/2; undo it for the decay check.
    integrand_edge = std::max({integrand_edge, std::abs(2.0 * weight[0] * wigner.values(row, 0)),
                               std::abs(2.0 * weight[np - 1] *
                                        wigner.values(row, static_cast<Eigen::Index>(np - 1)))});
    f[i] = acc;
  }
  if (integrand_peak > 0.0 && integrand_edge > 1e-10 * integrand_peak) {
    std::ostringstream msg;
    msg << "oracle_moments: p^" << order
        << " W has not decayed at the momentum-lattice edge (edge/peak = "
        << integrand_edge / integrand_peak << ")";
    warn(diag, msg.str());
  }
  return {wigner.x_grid, std::move(f)};
}

GridField oracle_moments(const WaveFunction& psi, int order, const PhysicalConstants& constants,
                         Diagnostics* diag) {
  return oracle_moments(wigner_of(psi, constants, diag), order, diag);
}

GridField analytic_cat_moment(const CatStateParams& params, int order,
                              const PhysicalConstants& constants, const SpatialGrid& grid) {
  if (order < 0) throw std::invalid_argument("analytic_cat_moment: order must be >= 0");
  if (order % 2 == 1) return GridField(grid);

  // With a = 1/(2 sigma^2), b = 2 k0 and n = 2M:
  //   f_n(x) = (hbar/2)^n 2 exp(-a x^2) [ a^M (2M)!/M! cos(b x)
  //                                        + sum_m binom(2M,2m) a^m (2m)!/m! b^(2M-2m) ]
  const int big_m = order / 2;
  const double a = 1.0 / (2.0 * params.sigma * params.sigma);
  const double b = 2.0 * params.k0;

  // gauss[m] = a^m (2m)!/m!, the magnitude of the 2m-th y-derivative of exp(-a y^2) at 0.
  std::vector<double> gauss(static_cast<std::size_t>(big_m) + 1);
  gauss[0] = 1.0;
  for (int m = 1; m <= big_m; ++m) {
    gauss[static_cast<std::size_t>(m)] =
        gauss[static_cast<std::size_t>(m - 1)] * a * (2.0 * m) * (2.0 * m - 1.0) / m;
  }
  double plane_sum = 0.0;
  double binom = 1.0;  // binom(2M, 2m)
  for (int m = 0; m <= big_m; ++m) {
    plane_sum += binom * gauss[static_cast<std::size_t>(m)] * std::pow(b, order - 2 * m);
    const double top = static_cast<double>(order - 2 * m);
    binom *= top * (top - 1.0) / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
  }
  const double prefactor = 2.0 * std::pow(0.5 * constants.hbar(), order);
  std::vector<double> f(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.point(j);
    f[j] = prefactor * std::exp(-a * x * x) *
           (gauss[static_cast<std::size_t>(big_m)] * std::cos(b * x) + plane_sum);
  }
  return {grid, std::move(f)};
}

bool check_cat_y_spacing(const CatStateParams& params, double y_spacing,
                         const PhysicalConstants& constants, Diagnostics* diag) {
  const double hbar = constants.hbar();
  const bool ok = hbar / (2.0 * y_spacing) >= 4.0 * (params.k0 * hbar + hbar / params.sigma);
  if (!ok) {
    warn(diag, "check_cat_y_spacing: y spacing too coarse to resolve cat-state momenta");
  }
  return ok;
}

}  // namespace hydrec
