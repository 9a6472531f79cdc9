#include "hydrec/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace hydrec::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Accepts either a directory (then `default_name` inside it) or a file path.
fs::path resolve(const fs::path& dir_or_file, const char* default_name) {
  return fs::is_directory(dir_or_file) ? dir_or_file / default_name : dir_or_file;
}

template <typename T>
T field(const json& j, const char* key, const fs::path& where) {
  if (!j.contains(key)) throw FormatError(where.string() + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(where.string() + ": field '" + key + "': " + e.what());
  }
}

void check_format(const json& j, const char* expected, const fs::path& where) {
  if (field<std::string>(j, "format", where) != expected) {
    throw FormatError(where.string() + ": expected format '" + expected + "'");
  }
  const int version = field<int>(j, "format_version", where);
  if (version != kFormatVersion) {
    throw FormatError(where.string() + ": unsupported format_version " + std::to_string(version));
  }
}

json to_json(const PhysicalConstants& c) { return {{"hbar", c.hbar()}, {"mass", c.mass()}}; }
json to_json(const SpatialGrid& g) {
  return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"n_points", g.size()}};
}
json to_json(const TimeNodes& t) { return {{"t0", t.t0()}, {"dt", t.dt()}, {"count", t.count()}}; }
json to_json(const SymmetricGrid& g) {
  return {{"extent", g.extent()}, {"half_count", g.half_count()}, {"spacing", g.spacing()}};
}

json to_json(const PotentialModel& v) {
  json j{{"kind", std::string(to_string(v.kind()))}};
  if (v.kind() == PotentialKind::polynomial) {
    j["coefficients"] = v.coefficient_table();
  } else {
    j["params"] = v.parameters();
  }
  return j;
}

// Invalid values throw std::invalid_argument from the constructors; rethrow
// those as format errors tied to the file.
template <typename F>
auto construct(const fs::path& where, F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw FormatError(where.string() + ": " + e.what());
  }
}

PhysicalConstants constants_from(const json& j, const fs::path& where) {
  return construct(where, [&] {
    return PhysicalConstants(field<double>(j, "hbar", where), field<double>(j, "mass", where));
  });
}

SpatialGrid grid_from(const json& j, const fs::path& where) {
  return construct(where, [&] {
    return SpatialGrid(field<double>(j, "x_min", where), field<double>(j, "x_max", where),
                       field<std::size_t>(j, "n_points", where));
  });
}

TimeNodes times_from(const json& j, const fs::path& where) {
  return construct(where, [&] {
    return TimeNodes(field<double>(j, "t0", where), field<double>(j, "dt", where),
                     field<std::size_t>(j, "count", where));
  });
}

SymmetricGrid y_grid_from(const json& j, const fs::path& where) {
  return construct(where, [&] {
    return SymmetricGrid::from_parts(field<double>(j, "extent", where),
                                     field<std::size_t>(j, "half_count", where),
                                     field<double>(j, "spacing", where));
  });
}

PotentialModel potential_from(const json& j, const fs::path& where) {
  return construct(where, [&] {
    const auto kind = potential_kind_from_string(field<std::string>(j, "kind", where));
    if (kind == PotentialKind::polynomial) {
      return PotentialModel::polynomial(
          field<std::vector<std::vector<double>>>(j, "coefficients", where));
    }
    const auto p = field<std::vector<double>>(j, "params", where);
    auto need = [&](std::size_t n) {
      if (p.size() != n) {
        throw FormatError(where.string() + ": potential '" + std::string(to_string(kind)) +
                          "' takes " + std::to_string(n) + " params");
      }
    };
    switch (kind) {
      case PotentialKind::free: need(0); return PotentialModel::free_particle();
      case PotentialKind::harmonic: need(2); return PotentialModel::harmonic(p[0], p[1]);
      case PotentialKind::quartic: need(2); return PotentialModel::quartic(p[0], p[1]);
      case PotentialKind::paul_trap:
        need(4);
        return PotentialModel::paul_trap(p[0], p[1], p[2], p[3]);
      case PotentialKind::polynomial: break;
    }
    throw FormatError(where.string() + ": unhandled potential kind");
  });
}

// Reads a payload, checks its length against `expected_doubles` and its checksum.
std::vector<double> read_payload(const fs::path& path, std::size_t expected_doubles,
                                 std::uint64_t checksum) {
  const auto bytes = read_bytes(path);
  if (bytes.size() != expected_doubles * sizeof(double)) {
    throw FormatError(path.string() + ": expected " +
                      std::to_string(expected_doubles * sizeof(double)) + " bytes, found " +
                      std::to_string(bytes.size()));
  }
  const std::uint64_t actual = fnv1a64(bytes);
  if (actual != checksum) {
    throw FormatError(path.string() + ": checksum mismatch (manifest " + format_checksum(checksum) +
                      ", file " + format_checksum(actual) + ")");
  }
  return read_doubles(path);
}

std::uint64_t write_payload(const fs::path& path, std::span<const double> values) {
  write_doubles(path, values);
  return fnv1a64_file(path);
}

std::vector<double> flatten(std::span<const GridField> fields) {
  std::vector<double> flat;
  flat.reserve(fields.empty() ? 0 : fields.size() * fields.front().size());
  for (const GridField& f : fields) flat.insert(flat.end(), f.values().begin(), f.values().end());
  return flat;
}

std::vector<GridField> unflatten(const std::vector<double>& flat, const SpatialGrid& grid,
                                 std::size_t rows) {
  std::vector<GridField> out;
  out.reserve(rows);
  const std::size_t n = grid.size();
  for (std::size_t r = 0; r < rows; ++r) {
    const auto first = flat.begin() + static_cast<std::ptrdiff_t>(r * n);
    out.emplace_back(grid, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n)));
  }
  return out;
}

std::vector<double> split_numbers(const std::string& text, char sep, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + item + "' in " + context);
    }
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a64_file(const fs::path& path) { return fnv1a64(read_bytes(path)); }

std::string format_checksum(std::uint64_t value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t parse_checksum(const std::string& text) {
  constexpr std::string_view prefix = "fnv1a64:";
  if (text.size() != prefix.size() + 16 || text.compare(0, prefix.size(), prefix) != 0) {
    throw FormatError("malformed checksum '" + text + "'");
  }
  std::uint64_t value = 0;
  for (char c : text.substr(prefix.size())) {
    int digit = 0;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else {
      throw FormatError("malformed checksum '" + text + "'");
    }
    value = (value << 4) | static_cast<std::uint64_t>(digit);
  }
  return value;
}

void write_doubles(const fs::path& path, std::span<const double> values) {
  std::vector<unsigned char> bytes(values.size() * sizeof(double));
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (std::size_t b = 0; b < 8; ++b) {
      bytes[i * 8 + b] = static_cast<unsigned char>(bits & 0xffU);
      bits >>= 8;
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<double> read_doubles(const fs::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() % sizeof(double) != 0) {
    throw FormatError(path.string() + ": length is not a multiple of 8 bytes");
  }
  std::vector<double> values(bytes.size() / sizeof(double));
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
    }
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

DatasetManifest write_dataset(const fs::path& dir, DatasetManifest manifest,
                              std::span<const GridField> records,
                              const std::vector<WaveFunction>* wavefunctions) {
  if (records.size() != manifest.times.count()) {
    throw std::invalid_argument("write_dataset: need one record per time node");
  }
  for (const GridField& r : records) {
    if (!(r.grid() == manifest.grid)) {
      throw std::invalid_argument("write_dataset: record grid differs from manifest grid");
    }
  }
  fs::create_directories(dir);
  manifest.format_version = kFormatVersion;
  manifest.layout = "time_major_rows";
  manifest.checksum = write_payload(dir / manifest.data_path, flatten(records));

  json j{{"format", "hydrec-dataset"},
         {"format_version", manifest.format_version},
         {"constants", to_json(manifest.constants)},
         {"grid", to_json(manifest.grid)},
         {"times", to_json(manifest.times)},
         {"potential", to_json(manifest.potential)},
         {"data_path", manifest.data_path},
         {"layout", manifest.layout},
         {"checksum", format_checksum(manifest.checksum)},
         {"provenance", manifest.provenance}};

  if (wavefunctions != nullptr) {
    if (wavefunctions->size() != records.size()) {
      throw std::invalid_argument("write_dataset: need one wavefunction per time node");
    }
    std::vector<double> flat;
    flat.reserve(2 * records.size() * manifest.grid.size());
    for (const WaveFunction& psi : *wavefunctions) {
      if (!(psi.grid() == manifest.grid)) {
        throw std::invalid_argument("write_dataset: wavefunction grid differs from manifest grid");
      }
      for (const Complex& a : psi.amplitudes()) {
        flat.push_back(a.real());
        flat.push_back(a.imag());
      }
    }
    const std::string path = manifest.wavefunction_path.value_or("psi.bin");
    manifest.wavefunction_path = path;
    manifest.wavefunction_checksum = write_payload(dir / path, flat);
    j["wavefunctions"] = {{"path", path},
                          {"checksum", format_checksum(*manifest.wavefunction_checksum)}};
  } else {
    manifest.wavefunction_path.reset();
    manifest.wavefunction_checksum.reset();
  }
  write_text(dir / kDatasetManifestName, dump(j));
  return manifest;
}

Dataset read_dataset(const fs::path& dir_or_manifest) {
  const fs::path path = resolve(dir_or_manifest, kDatasetManifestName);
  const fs::path base = path.parent_path();
  const json j = read_json(path);
  check_format(j, "hydrec-dataset", path);

  DatasetManifest m;
  m.constants = constants_from(field<json>(j, "constants", path), path);
  m.grid = grid_from(field<json>(j, "grid", path), path);
  m.times = times_from(field<json>(j, "times", path), path);
  m.potential = potential_from(field<json>(j, "potential", path), path);
  m.data_path = field<std::string>(j, "data_path", path);
  m.layout = field<std::string>(j, "layout", path);
  if (m.layout != "time_major_rows") {
    throw FormatError(path.string() + ": unsupported layout '" + m.layout + "'");
  }
  m.checksum = parse_checksum(field<std::string>(j, "checksum", path));
  m.provenance = field<std::string>(j, "provenance", path);

  const std::size_t rows = m.times.count();
  const std::size_t n = m.grid.size();
  Dataset ds{m, {}, std::nullopt};
  ds.records = construct(path, [&] {
    return unflatten(read_payload(base / m.data_path, rows * n, m.checksum), m.grid, rows);
  });

  if (j.contains("wavefunctions")) {
    const json& w = j.at("wavefunctions");
    ds.manifest.wavefunction_path = field<std::string>(w, "path", path);
    ds.manifest.wavefunction_checksum = parse_checksum(field<std::string>(w, "checksum", path));
    const auto flat = read_payload(base / *ds.manifest.wavefunction_path, 2 * rows * n,
                                   *ds.manifest.wavefunction_checksum);
    std::vector<WaveFunction> states;
    states.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Complex> amps(n);
      for (std::size_t i = 0; i < n; ++i) {
        amps[i] = {flat[2 * (r * n + i)], flat[2 * (r * n + i) + 1]};
      }
      states.emplace_back(m.grid, std::move(amps));
    }
    ds.wavefunctions = std::move(states);
  }
  return ds;
}

Dataset mix_datasets(std::span<const Dataset> parts, std::span<const double> weights) {
  if (parts.empty() || parts.size() != weights.size()) {
    throw std::invalid_argument("mix_datasets: need one weight per dataset");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("mix_datasets: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mix_datasets: weights must sum to 1");
  }
  const DatasetManifest& ref = parts.front().manifest;
  for (const Dataset& d : parts) {
    const DatasetManifest& m = d.manifest;
    if (!(m.grid == ref.grid && m.times == ref.times && m.constants == ref.constants &&
          m.potential == ref.potential)) {
      throw std::invalid_argument(
          "mix_datasets: datasets must share grid, times, constants and potential");
    }
  }
  Dataset out{ref, {}, std::nullopt};
  out.manifest.wavefunction_path.reset();
  out.manifest.wavefunction_checksum.reset();
  out.manifest.provenance = "mixture of " + std::to_string(parts.size()) + " datasets";
  for (std::size_t j = 0; j < ref.times.count(); ++j) {
    std::vector<double> f(ref.grid.size(), 0.0);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const GridField& r = parts[k].records[j];
      for (std::size_t i = 0; i < f.size(); ++i) f[i] += weights[k] * r[i];
    }
    out.records.emplace_back(ref.grid, std::move(f));
  }
  return out;
}

MomentSet write_moment_set(const fs::path& dir, MomentSet set) {
  if (set.moments.empty()) throw std::invalid_argument("write_moment_set: no moments");
  const SpatialGrid& grid = set.moments.front().grid();
  for (const GridField& f : set.moments) {
    if (!(f.grid() == grid)) throw std::invalid_argument("write_moment_set: mixed grids");
  }
  fs::create_directories(dir);
  set.format_version = kFormatVersion;
  set.checksum = write_payload(dir / set.data_path, flatten(set.moments));

  json j{{"format", "hydrec-moments"},
         {"format_version", set.format_version},
         {"dataset", {{"manifest", set.dataset_manifest},
                      {"checksum", format_checksum(set.dataset_checksum)}}},
         {"node", set.node},
         {"central_time", set.central_time},
         {"order", set.moments.size() - 1},
         {"constants", to_json(set.constants)},
         {"grid", to_json(grid)},
         {"tail_closure", set.tail_closure},
         {"data_path", set.data_path},
         {"layout", "order_major_rows"},
         {"checksum", format_checksum(set.checksum)},
         {"warnings", set.warnings}};
  if (set.smoothing) {
    j["smoothing"] = {{"window", set.smoothing->window}, {"degree", set.smoothing->degree}};
  } else {
    j["smoothing"] = nullptr;
  }
  write_text(dir / kMomentSetName, dump(j));
  return set;
}

MomentSet read_moment_set(const fs::path& dir_or_file) {
  const fs::path path = resolve(dir_or_file, kMomentSetName);
  const json j = read_json(path);
  check_format(j, "hydrec-moments", path);

  MomentSet set;
  const json ds = field<json>(j, "dataset", path);
  set.dataset_manifest = field<std::string>(ds, "manifest", path);
  set.dataset_checksum = parse_checksum(field<std::string>(ds, "checksum", path));
  set.node = field<std::size_t>(j, "node", path);
  set.central_time = field<double>(j, "central_time", path);
  set.constants = constants_from(field<json>(j, "constants", path), path);
  set.tail_closure = field<bool>(j, "tail_closure", path);
  set.data_path = field<std::string>(j, "data_path", path);
  set.checksum = parse_checksum(field<std::string>(j, "checksum", path));
  set.warnings = field<std::vector<std::string>>(j, "warnings", path);
  if (j.contains("smoothing") && !j.at("smoothing").is_null()) {
    const json& s = j.at("smoothing");
    set.smoothing = SmoothingSpec{field<std::size_t>(s, "window", path),
                                  field<std::size_t>(s, "degree", path)};
  }
  const SpatialGrid grid = grid_from(field<json>(j, "grid", path), path);
  const std::size_t rows = field<std::size_t>(j, "order", path) + 1;
  set.moments = construct(path, [&] {
    return unflatten(read_payload(path.parent_path() / set.data_path, rows * grid.size(),
                                  set.checksum),
                     grid, rows);
  });
  return set;
}

DensityGridFile write_density_grid(const fs::path& dir, const DensityMatrixGrid& rho, int order,
                                   double hbar) {
  fs::create_directories(dir);
  DensityGridFile file{order, hbar, "rho.bin", 0};
  std::vector<double> flat;
  flat.reserve(2 * static_cast<std::size_t>(rho.values.size()));
  for (Eigen::Index i = 0; i < rho.values.rows(); ++i) {
    for (Eigen::Index k = 0; k < rho.values.cols(); ++k) {
      flat.push_back(rho.values(i, k).real());
      flat.push_back(rho.values(i, k).imag());
    }
  }
  file.checksum = write_payload(dir / file.data_path, flat);
  json j{{"format", "hydrec-density-grid"},
         {"format_version", kFormatVersion},
         {"order", order},
         {"hbar", hbar},
         {"x_grid", to_json(rho.x_grid)},
         {"y_grid", to_json(rho.y_grid)},
         {"data_path", file.data_path},
         {"layout", "x_major_interleaved_complex"},
         {"checksum", format_checksum(file.checksum)}};
  write_text(dir / kDensityGridName, dump(j));
  return file;
}

DensityMatrixGrid read_density_grid(const fs::path& dir_or_file) {
  const fs::path path = resolve(dir_or_file, kDensityGridName);
  const json j = read_json(path);
  check_format(j, "hydrec-density-grid", path);
  const SpatialGrid xg = grid_from(field<json>(j, "x_grid", path), path);
  const SymmetricGrid yg = y_grid_from(field<json>(j, "y_grid", path), path);
  const auto flat = read_payload(path.parent_path() / field<std::string>(j, "data_path", path),
                                 2 * xg.size() * yg.size(),
                                 parse_checksum(field<std::string>(j, "checksum", path)));
  const auto nx = static_cast<Eigen::Index>(xg.size());
  const auto ny = static_cast<Eigen::Index>(yg.size());
  DensityMatrixGrid rho{xg, yg, Eigen::MatrixXcd(nx, ny), 0};
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index k = 0; k < ny; ++k, p += 2) rho.values(i, k) = {flat[p], flat[p + 1]};
  }
  return rho;
}

void write_surface_table(const fs::path& path, const DensityMatrixGrid& rho) {
  std::string text = "# x\ty\tRe\tIm\n";
  char line[128];
  for (Eigen::Index i = 0; i < rho.values.rows(); ++i) {
    const double x = rho.x_grid.point(static_cast<std::size_t>(i));
    for (Eigen::Index k = 0; k < rho.values.cols(); ++k) {
      const double y = rho.y_grid.point(static_cast<std::size_t>(k));
      std::snprintf(line, sizeof line, "%.17g\t%.17g\t%.17g\t%.17g\n", x, y,
                    rho.values(i, k).real(), rho.values(i, k).imag());
      text += line;
    }
    text += '\n';  // blank line between x rows for gnuplot's pm3d
  }
  write_text(path, text);
}

void write_report(const fs::path& path, const ComparisonReport& r) {
  const json j{{"format", "hydrec-comparison"},
               {"format_version", kFormatVersion},
               {"region", {{"x_max", r.region.x_max}, {"y_max", r.region.y_max}}},
               {"sup_error", r.sup_error},
               {"sup_error_real", r.sup_error_real},
               {"l2_error", r.l2_error},
               {"trace_a", r.trace_a},
               {"trace_b", r.trace_b},
               {"hermiticity_defect", r.hermiticity_defect},
               {"diagonal_mismatch", r.diagonal_mismatch},
               {"resampled", r.resampled},
               {"cells_compared", r.cells_compared}};
  write_text(path, dump(j));
}

ComparisonReport read_report(const fs::path& path) {
  const json j = read_json(path);
  check_format(j, "hydrec-comparison", path);
  ComparisonReport r;
  const json region = field<json>(j, "region", path);
  r.region = {field<double>(region, "x_max", path), field<double>(region, "y_max", path)};
  r.sup_error = field<double>(j, "sup_error", path);
  r.sup_error_real = field<double>(j, "sup_error_real", path);
  r.l2_error = field<double>(j, "l2_error", path);
  r.trace_a = field<double>(j, "trace_a", path);
  r.trace_b = field<double>(j, "trace_b", path);
  r.hermiticity_defect = field<double>(j, "hermiticity_defect", path);
  r.diagonal_mismatch = field<double>(j, "diagonal_mismatch", path);
  r.resampled = field<bool>(j, "resampled", path);
  r.cells_compared = field<std::size_t>(j, "cells_compared", path);
  return r;
}

PotentialModel parse_potential(const std::string& text, double mass) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  const PotentialKind kind = potential_kind_from_string(name);
  if (kind == PotentialKind::polynomial) {
    std::vector<std::vector<double>> table;
    std::stringstream ss(args);
    std::string order;
    while (std::getline(ss, order, '/')) table.push_back(split_numbers(order, ',', text));
    return PotentialModel::polynomial(std::move(table));
  }
  const auto p = args.empty() ? std::vector<double>{} : split_numbers(args, ',', text);
  auto need = [&](std::size_t n) {
    if (p.size() != n) {
      throw std::invalid_argument("potential '" + name + "' takes " + std::to_string(n) +
                                  " parameter(s), got " + std::to_string(p.size()));
    }
  };
  switch (kind) {
    case PotentialKind::free: need(0); return PotentialModel::free_particle();
    case PotentialKind::harmonic: need(1); return PotentialModel::harmonic(p[0], mass);
    case PotentialKind::quartic: need(2); return PotentialModel::quartic(p[0], p[1]);
    case PotentialKind::paul_trap: need(3); return PotentialModel::paul_trap(p[0], p[1], p[2], mass);
    case PotentialKind::polynomial: break;
  }
  throw std::invalid_argument("unhandled potential kind");
}

}  // namespace hydrec::io
