#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hydrec/assembly.hpp"
#include "hydrec/numerics.hpp"
#include "hydrec/potentials.hpp"
#include "hydrec/reconstruction.hpp"
#include "hydrec/simulator.hpp"

namespace hydrec::io {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kDatasetManifestName = "manifest.json";
inline constexpr const char* kMomentSetName = "moments.json";
inline constexpr const char* kDensityGridName = "rho.json";

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
/// "fnv1a64:" followed by 16 lowercase hex digits.
std::string format_checksum(std::uint64_t value);
std::uint64_t parse_checksum(const std::string& text);

/// Raw little-endian IEEE-754 doubles.
void write_doubles(const std::filesystem::path& path, std::span<const double> values);
std::vector<double> read_doubles(const std::filesystem::path& path);

/// Describes a measured (or simulated) f0 time series. The payload holds
/// (m+1) rows of n_points doubles, one row per time node.
struct DatasetManifest {
  int format_version = kFormatVersion;
  PhysicalConstants constants;
  SpatialGrid grid{-10.0, 10.0, 1024};
  TimeNodes times{0.0, 1.0, 1};
  PotentialModel potential = PotentialModel::free_particle();
  std::string data_path = "f0.bin";
  std::string layout = "time_major_rows";
  std::uint64_t checksum = 0;
  std::string provenance = "experimental";
  /// Optional complex amplitudes at every node, interleaved re/im, time-major.
  std::optional<std::string> wavefunction_path;
  std::optional<std::uint64_t> wavefunction_checksum;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<GridField> records;
  std::optional<std::vector<WaveFunction>> wavefunctions;
};

/// Writes payload(s) into `dir` and the manifest alongside, filling in the checksums.
DatasetManifest write_dataset(const std::filesystem::path& dir, DatasetManifest manifest,
                              std::span<const GridField> records,
                              const std::vector<WaveFunction>* wavefunctions = nullptr);

/// Reads a dataset from a directory (or a manifest path); verifies payload
/// length and checksum.
Dataset read_dataset(const std::filesystem::path& dir_or_manifest);

/// Mixed-state dataset: f0 = sum_i w_i f0_i over pure-state datasets that share
/// grid, times, constants and potential. Weights must be nonnegative and sum
/// to 1. Stored wavefunctions are dropped since a mixture has none.
Dataset mix_datasets(std::span<const Dataset> parts, std::span<const double> weights);

/// Moments f_0..f_N at one time node of a dataset.
struct MomentSet {
  int format_version = kFormatVersion;
  std::string dataset_manifest;  // path as given to the reconstruct command
  std::uint64_t dataset_checksum = 0;
  std::size_t node = 0;
  double central_time = 0.0;
  PhysicalConstants constants;
  std::optional<SmoothingSpec> smoothing;
  bool tail_closure = true;
  std::vector<GridField> moments;
  std::string data_path = "moments.bin";
  std::uint64_t checksum = 0;
  std::vector<std::string> warnings;
};

MomentSet write_moment_set(const std::filesystem::path& dir, MomentSet set);
MomentSet read_moment_set(const std::filesystem::path& dir_or_file);

struct DensityGridFile {
  int order = 0;
  double hbar = 1.0;
  std::string data_path = "rho.bin";
  std::uint64_t checksum = 0;
};

/// Stores rho as x-major rows of interleaved (re, im) doubles.
DensityGridFile write_density_grid(const std::filesystem::path& dir, const DensityMatrixGrid& rho,
                                   int order, double hbar);
DensityMatrixGrid read_density_grid(const std::filesystem::path& dir_or_file);

/// "x y Re Im" per line, x-major.
void write_surface_table(const std::filesystem::path& path, const DensityMatrixGrid& rho);

void write_report(const std::filesystem::path& path, const ComparisonReport& report);
ComparisonReport read_report(const std::filesystem::path& path);

/// Parses "kind:params", e.g. "free", "harmonic:1", "quartic:0.5,0.1",
/// "paul_trap:1,0.5,6.28", "polynomial:0/0/1,0.5" (orders separated by '/',
/// time coefficients by ','). Harmonic and paul_trap take the mass from `mass`.
PotentialModel parse_potential(const std::string& text, double mass);

}  // namespace hydrec::io
