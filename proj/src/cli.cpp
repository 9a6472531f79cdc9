#include "hydrec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "hydrec/assembly.hpp"
#include "hydrec/io.hpp"
#include "hydrec/reconstruction.hpp"
#include "hydrec/simulator.hpp"

namespace hydrec {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size()) {
      throw std::invalid_argument(std::string(flag) + ": bad number '" + item + "'");
    }
    out.push_back(v);
  }
  if (expected != 0 && out.size() != expected) {
    throw std::invalid_argument(std::string(flag) + " expects " + std::to_string(expected) +
                                " comma-separated values");
  }
  return out;
}

std::size_t as_count(double v, const char* flag) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e12) {
    throw std::invalid_argument(std::string(flag) + ": expected a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

SpatialGrid parse_grid(const std::string& text) {
  const auto v = parse_list(text, 3, "--grid");
  return {v[0], v[1], as_count(v[2], "--grid")};
}

// "--times t0,dt,m" gives m+1 nodes.
TimeNodes parse_times(const std::string& text) {
  const auto v = parse_list(text, 3, "--times");
  return {v[0], v[1], as_count(v[2], "--times") + 1};
}

std::optional<SmoothingSpec> parse_smoothing(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_list(text, 2, "--smooth");
  return SmoothingSpec{as_count(v[0], "--smooth"), as_count(v[1], "--smooth")};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

struct Common {
  double hbar = 1.0;
  double mass = 1.0;
  std::string out = ".";
};

void add_constants(CLI::App* cmd, Common& c) {
  cmd->add_option("--hbar", c.hbar, "Reduced Planck constant")->capture_default_str();
  cmd->add_option("--mass", c.mass, "Particle mass")->capture_default_str();
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string state = "cat";
  std::string potential = "free";
  std::string grid = "-10,10,1024";
  std::string times = "0,0.005,4";
  double sigma = CatStateParams{}.sigma;
  double k0 = CatStateParams{}.k0;
  double x0 = 0.0;
  double p0 = 0.0;
  double omega = 1.0;
  std::size_t substeps = 20;
  double noise = 0.0;
  std::uint64_t seed = 20240601;
  bool store_psi = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const PhysicalConstants constants(a.common.hbar, a.common.mass);
  const SpatialGrid grid = parse_grid(a.grid);
  const TimeNodes nodes = parse_times(a.times);
  const PotentialModel model = io::parse_potential(a.potential, constants.mass());

  Diagnostics diag;
  std::optional<WaveFunction> initial;
  std::ostringstream provenance;
  provenance << "simulated: state=" << a.state;
  if (a.state == "cat") {
    initial = make_cat_state({a.sigma, a.k0}, grid, &diag);
    provenance << " sigma=" << fmt(a.sigma) << " k0=" << fmt(a.k0);
  } else if (a.state == "gaussian") {
    initial = make_gaussian_state(a.sigma, a.x0, a.k0, grid);
    provenance << " sigma=" << fmt(a.sigma) << " x0=" << fmt(a.x0) << " k0=" << fmt(a.k0);
  } else if (a.state == "coherent") {
    initial = make_coherent_state(a.omega, a.x0, a.p0, constants, grid);
    provenance << " omega=" << fmt(a.omega) << " x0=" << fmt(a.x0) << " p0=" << fmt(a.p0);
  } else {
    throw std::invalid_argument("--state must be cat, gaussian or coherent");
  }
  provenance << "; potential=" << a.potential << "; split-operator substeps=" << a.substeps;

  const auto states = evolve_to_nodes(*initial, model, constants, nodes, a.substeps);

  std::vector<GridField> records;
  records.reserve(states.size());
  for (const WaveFunction& psi : states) records.push_back(probability_density(psi));

  if (a.noise > 0.0) {
    // Additive detector noise, sigma relative to the peak of the first record.
    const double scale = a.noise * records.front().max_abs();
    std::mt19937_64 rng(a.seed);
    std::normal_distribution<double> gauss(0.0, scale);
    for (GridField& r : records) {
      std::vector<double> v(r.values().begin(), r.values().end());
      for (double& x : v) x = std::max(0.0, x + gauss(rng));
      r = GridField(grid, std::move(v));
    }
    provenance << "; noise=" << fmt(a.noise) << " seed=" << a.seed;
  }

  io::DatasetManifest manifest;
  manifest.constants = constants;
  manifest.grid = grid;
  manifest.times = nodes;
  manifest.potential = model;
  manifest.provenance = provenance.str();
  const auto written = io::write_dataset(a.common.out, manifest, records,
                                         a.store_psi ? &states : nullptr);
  report_warnings(diag.warnings(), err);
  out << "wrote " << (fs::path(a.common.out) / io::kDatasetManifestName).string() << " ("
      << nodes.count() << " records, " << io::format_checksum(written.checksum) << ")\n";
  for (std::size_t j = 0; j < records.size(); ++j) {
    out << "  t=" << fmt(nodes.time(j)) << "  norm=" << fmt(integrate(records[j])) << "\n";
  }
  return kExitOk;
}

// ---- reconstruct ------------------------------------------------------------

struct ReconstructArgs {
  Common common;
  std::string dataset;
  int order = 0;
  std::string smooth;
  std::optional<std::size_t> node;
  bool no_tail_closure = false;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
  const io::Dataset ds = io::read_dataset(a.dataset);
  const TimeNodes& nodes = ds.manifest.times;
  if (a.order < 0) throw std::invalid_argument("--order must be non-negative");
  if (static_cast<std::size_t>(a.order) > nodes.m()) {
    throw InsufficientSamplesError("moment of order " + std::to_string(a.order) + " needs f0 at " +
                                   std::to_string(a.order + 1) +
                                   " time values (n+1 rule); the dataset has " +
                                   std::to_string(nodes.count()));
  }
  const std::size_t node = a.node.value_or(nodes.central_index());
  if (node >= nodes.count()) throw std::invalid_argument("--node is out of range");

  ReconstructionOptions options;
  options.smoothing = parse_smoothing(a.smooth);
  options.close_tails = !a.no_tail_closure;
  const MomentPyramid pyramid = build_pyramid(ds.records, nodes, ds.manifest.potential,
                                              ds.manifest.constants, a.order, options);

  io::MomentSet set;
  set.dataset_manifest = a.dataset;
  set.dataset_checksum = ds.manifest.checksum;
  set.node = node;
  set.central_time = nodes.time(node);
  set.constants = ds.manifest.constants;
  set.smoothing = options.smoothing;
  set.tail_closure = options.close_tails;
  for (int n = 0; n <= a.order; ++n) set.moments.push_back(pyramid.at(n, node));
  set.warnings = pyramid.diagnostics().warnings();
  io::write_moment_set(a.common.out, set);

  report_warnings(set.warnings, err);
  out << "wrote " << (fs::path(a.common.out) / io::kMomentSetName).string() << " (orders 0.."
      << a.order << " at t=" << fmt(set.central_time) << ")\n";
  for (int n = 0; n <= a.order; ++n) {
    out << "  f" << n << "  max|f|=" << sci(set.moments[static_cast<std::size_t>(n)].max_abs())
        << "\n";
  }
  return kExitOk;
}

// ---- assemble / compare -----------------------------------------------------

struct AssembleArgs {
  Common common;
  std::string moments;
  double y_max = 1.5;
  std::size_t n_y = 201;
  std::string reference = "analytic-cat";
  std::string region;
  double sigma = CatStateParams{}.sigma;
  double k0 = CatStateParams{}.k0;
};

TaylorReconstruction assemble_from(const io::MomentSet& set, double y_max, std::size_t n_y) {
  return assemble(set.moments, SymmetricGrid(y_max, n_y), set.constants.hbar());
}

std::string assembly_summary(const TaylorReconstruction& rec) {
  std::ostringstream s;
  s << "order\t" << rec.order << "\n";
  s << "hbar\t" << fmt(rec.hbar) << "\n";
  s << "x_points\t" << rec.values.x_grid.size() << "\n";
  s << "y_points\t" << rec.values.y_grid.size() << "\n";
  s << "y_max\t" << fmt(rec.values.y_grid.extent()) << "\n";
  s << "trust_radius\t" << fmt(rec.trust_radius) << "\n";
  s << "overflow_risk\t" << (rec.overflow_risk ? "yes" : "no") << "\n";
  s << "hermiticity_defect\t" << fmt(hermiticity_defect(rec.values)) << "\n";
  for (std::size_t n = 0; n < rec.max_term_magnitude.size(); ++n) {
    s << "max_term_" << n << "\t" << fmt(rec.max_term_magnitude[n]) << "\n";
  }
  return s.str();
}

void write_assembly(const fs::path& dir, const TaylorReconstruction& rec) {
  io::write_density_grid(dir, rec.values, rec.order, rec.hbar);
  io::write_surface_table(dir / ("surface_N" + std::to_string(rec.order) + ".tsv"), rec.values);
  write_file(dir / "summary.tsv", assembly_summary(rec));
}

int cmd_assemble(const AssembleArgs& a, std::ostream& out, std::ostream& err) {
  const io::MomentSet set = io::read_moment_set(a.moments);
  const TaylorReconstruction rec = assemble_from(set, a.y_max, a.n_y);
  fs::create_directories(a.common.out);
  write_assembly(a.common.out, rec);
  if (rec.overflow_risk) err << "warning: Taylor terms exceed 1e300; result is unreliable\n";
  out << "assembled rho_" << rec.order << " on " << rec.values.x_grid.size() << " x "
      << rec.values.y_grid.size() << " points; trust radius " << fmt(rec.trust_radius) << "\n";
  return kExitOk;
}

DensityMatrixGrid resolve_reference(const AssembleArgs& a, const io::MomentSet& set,
                                    const TaylorReconstruction& rec, std::ostream& err) {
  // The cat closed form does not involve hbar: rho(x, y) depends on psi only.
  if (a.reference == "analytic-cat") {
    return analytic_cat_density_matrix({a.sigma, a.k0}, rec.values.x_grid, rec.values.y_grid);
  }
  if (a.reference == "stored-psi") {
    fs::path manifest = set.dataset_manifest;
    if (!fs::exists(manifest)) {
      const fs::path beside = fs::path(a.moments) / manifest;
      if (!fs::exists(beside)) {
        throw MissingReferenceError("dataset '" + set.dataset_manifest + "' not found");
      }
      manifest = beside;
    }
    const io::Dataset ds = io::read_dataset(manifest);
    if (ds.manifest.checksum != set.dataset_checksum) {
      throw MissingReferenceError("dataset '" + set.dataset_manifest +
                                  "' changed since the moments were reconstructed");
    }
    if (!ds.wavefunctions) {
      throw MissingReferenceError("dataset '" + set.dataset_manifest +
                                  "' has no stored wavefunctions (simulate --store-psi)");
    }
    Diagnostics diag;
    auto rho = exact_density_matrix((*ds.wavefunctions)[set.node], rec.values.y_grid, &diag);
    report_warnings(diag.warnings(), err);
    return rho;
  }
  constexpr std::string_view grid_prefix = "grid:";
  if (a.reference.rfind(grid_prefix, 0) == 0) {
    const fs::path path = a.reference.substr(grid_prefix.size());
    if (!fs::exists(path)) {
      throw MissingReferenceError("reference grid '" + path.string() + "' not found");
    }
    return io::read_density_grid(path);
  }
  throw std::invalid_argument("--reference must be analytic-cat, stored-psi or grid:<dir>");
}

int cmd_compare(const AssembleArgs& a, std::ostream& out, std::ostream& err) {
  const io::MomentSet set = io::read_moment_set(a.moments);
  const TaylorReconstruction rec = assemble_from(set, a.y_max, a.n_y);
  const DensityMatrixGrid reference = resolve_reference(a, set, rec, err);

  ComparisonRegion region{std::max(std::abs(rec.values.x_grid.x_min()),
                                   std::abs(rec.values.x_grid.x_max())),
                          a.y_max};
  if (!a.region.empty()) {
    const auto v = parse_list(a.region, 2, "--region");
    region = {v[0], v[1]};
  }
  const ComparisonReport report = compare(rec.values, reference, region, set.moments.front());

  const fs::path dir = a.common.out;
  fs::create_directories(dir);
  write_assembly(dir, rec);
  io::write_surface_table(dir / "reference.tsv", reference);
  io::write_report(dir / "report.json", report);
  out << "rho_" << rec.order << " vs " << a.reference << " over |x|<=" << fmt(region.x_max)
      << ", |y|<=" << fmt(region.y_max) << ":\n"
      << "  sup error      " << sci(report.sup_error) << "\n"
      << "  sup error (Re) " << sci(report.sup_error_real) << "\n"
      << "  L2 error       " << sci(report.l2_error) << "\n"
      << "  diagonal       " << sci(report.diagonal_mismatch) << "\n";
  return kExitOk;
}

// ---- demo-cat ---------------------------------------------------------------

struct DemoArgs {
  Common common;
  std::string orders = "10,20,36";
  std::string grid = "-3,3,241";
  double y_max = 1.5;
  std::size_t n_y = 201;
  double sigma = CatStateParams{}.sigma;
  double k0 = CatStateParams{}.k0;
};

int cmd_demo_cat(const DemoArgs& a, std::ostream& out, std::ostream& /*err*/) {
  const PhysicalConstants constants(a.common.hbar, a.common.mass);
  const CatStateParams params{a.sigma, a.k0};
  const SpatialGrid grid = parse_grid(a.grid);
  const SymmetricGrid y_grid(a.y_max, a.n_y);
  std::vector<int> orders;
  for (double v : parse_list(a.orders, 0, "--orders")) {
    orders.push_back(static_cast<int>(as_count(v, "--orders")));
  }
  if (orders.empty()) throw std::invalid_argument("--orders is empty");
  const int top = *std::max_element(orders.begin(), orders.end());

  std::vector<GridField> moments;
  for (int n = 0; n <= top; ++n) moments.push_back(analytic_cat_moment(params, n, constants, grid));

  const DensityMatrixGrid exact = analytic_cat_density_matrix(params, grid, y_grid);
  const ComparisonRegion region{std::min(3.0, std::max(-grid.x_min(), grid.x_max())), a.y_max};

  const fs::path dir = a.common.out;
  fs::create_directories(dir);
  std::string table = "order\tsup_error_real\tsup_error\tl2_error\ttrust_radius\n";
  out << "order  sup|Re err|     sup|err|        trust radius\n";
  for (int order : orders) {
    const auto first = moments.begin();
    const std::vector<GridField> used(first, first + order + 1);
    TaylorReconstruction rec = assemble(used, y_grid, constants.hbar());
    const ComparisonReport report = compare(rec.values, exact, region);
    io::write_surface_table(dir / ("surface_N" + std::to_string(order) + ".tsv"), rec.values);
    table += std::to_string(order) + "\t" + fmt(report.sup_error_real) + "\t" +
             fmt(report.sup_error) + "\t" + fmt(report.l2_error) + "\t" + fmt(rec.trust_radius) +
             "\n";
    char line[128];
    std::snprintf(line, sizeof line, "%5d  %.6e  %.6e  %.4g\n", order, report.sup_error_real,
                  report.sup_error, rec.trust_radius);
    out << line;
  }
  io::write_surface_table(dir / "exact.tsv", exact);
  write_file(dir / "summary.tsv", table);
  out << "wrote " << orders.size() << " surfaces and summary.tsv to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density-matrix reconstruction from time-resolved position densities", "hydrec"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a wave packet and write f0 records");
  add_constants(simulate, sim.common);
  simulate->add_option("--state", sim.state, "cat | gaussian | coherent")->capture_default_str();
  simulate->add_option("--potential", sim.potential,
                       "kind:params, e.g. free, harmonic:1, quartic:0.5,0.1, paul_trap:A,B,Omega, "
                       "polynomial:a00,a01/a10/a20 ('/' between powers of x)")
      ->capture_default_str();
  simulate->add_option("--grid", sim.grid, "x_min,x_max,n_points")->capture_default_str();
  simulate->add_option("--times", sim.times, "t0,dt,m (m+1 nodes)")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Packet width")->capture_default_str();
  simulate->add_option("--k0", sim.k0, "Carrier wavenumber")->capture_default_str();
  simulate->add_option("--x0", sim.x0, "Initial center")->capture_default_str();
  simulate->add_option("--p0", sim.p0, "Initial momentum (coherent)")->capture_default_str();
  simulate->add_option("--omega", sim.omega, "Oscillator frequency (coherent)")
      ->capture_default_str();
  simulate->add_option("--substeps", sim.substeps, "Propagation steps per node interval")
      ->capture_default_str();
  simulate->add_option("--noise", sim.noise,
                       "Gaussian noise sigma relative to the peak of f0 (clipped at 0)")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  simulate->add_flag("--store-psi", sim.store_psi, "Also store wavefunctions for oracle use");
  simulate->add_option("--out", sim.common.out, "Output directory")->required();

  ReconstructArgs rc;
  auto* reconstruct = app.add_subcommand("reconstruct", "Compute moments f_0..f_N from a dataset");
  reconstruct->add_option("dataset", rc.dataset, "Dataset directory or manifest")->required();
  reconstruct->add_option("--order", rc.order, "Highest moment order N (N <= m)")->required();
  reconstruct->add_option("--smooth", rc.smooth, "window,degree local polynomial smoothing of f0");
  reconstruct->add_option("--node", rc.node, "Time node (default: central)");
  reconstruct->add_flag("--no-tail-closure", rc.no_tail_closure,
                        "Keep the raw right-edge residual of each moment");
  reconstruct->add_option("--out", rc.common.out, "Output directory")->required();

  AssembleArgs as;
  auto* assemble_cmd = app.add_subcommand("assemble", "Sum the Taylor series for rho_N");
  AssembleArgs cmp;
  auto* compare_cmd =
      app.add_subcommand("compare", "Assemble rho_N and compare it with a reference");
  for (auto [cmd, args] : {std::pair{assemble_cmd, &as}, std::pair{compare_cmd, &cmp}}) {
    cmd->add_option("moments", args->moments, "Moment-set directory or file")->required();
    cmd->add_option("--y-max", args->y_max, "Half-width of the y lattice")->capture_default_str();
    cmd->add_option("--n-y", args->n_y, "Odd number of y points")->capture_default_str();
    cmd->add_option("--out", args->common.out, "Output directory")->required();
  }
  compare_cmd->add_option("--reference", cmp.reference, "analytic-cat | stored-psi | grid:<dir>")
      ->capture_default_str();
  compare_cmd->add_option("--region", cmp.region, "x_max,y_max of the compared region");
  compare_cmd->add_option("--sigma", cmp.sigma, "Cat width (analytic-cat)")->capture_default_str();
  compare_cmd->add_option("--k0", cmp.k0, "Cat wavenumber (analytic-cat)")->capture_default_str();

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-cat", "Cat-state Taylor surfaces for several orders");
  add_constants(demo_cmd, demo.common);
  demo_cmd->add_option("--orders", demo.orders, "Comma-separated orders")->capture_default_str();
  demo_cmd->add_option("--grid", demo.grid, "x_min,x_max,n_points")->capture_default_str();
  demo_cmd->add_option("--y-max", demo.y_max)->capture_default_str();
  demo_cmd->add_option("--n-y", demo.n_y)->capture_default_str();
  demo_cmd->add_option("--sigma", demo.sigma)->capture_default_str();
  demo_cmd->add_option("--k0", demo.k0)->capture_default_str();
  demo_cmd->add_option("--out", demo.common.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out, err);
    if (*reconstruct) return cmd_reconstruct(rc, out, err);
    if (*assemble_cmd) return cmd_assemble(as, out, err);
    if (*compare_cmd) return cmd_compare(cmp, out, err);
    if (*demo_cmd) return cmd_demo_cat(demo, out, err);
  } catch (const SimulationQualityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSimulationQuality;
  } catch (const InsufficientSamplesError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInsufficientSamples;
  } catch (const MissingReferenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMissingReference;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace hydrec
