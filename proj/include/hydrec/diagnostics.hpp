#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hydrec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Propagation failed a quality check (norm drift, wrap-around at the grid edge).
class SimulationQualityError : public Error {
 public:
  using Error::Error;
};

/// A moment of order n was requested from fewer than n+1 time samples.
class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

/// A comparison reference (stored wavefunction, grid file) could not be resolved.
class MissingReferenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed or corrupted file (bad manifest, checksum mismatch, wrong length).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Accumulates non-fatal warnings raised while computing a result.
///
/// Functions that can detect a questionable but recoverable condition take an
/// optional `Diagnostics*`; passing nullptr discards the warnings.
class Diagnostics {
 public:
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  void merge(const Diagnostics& other) {
    warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
  }

  [[nodiscard]] bool empty() const { return warnings_.empty(); }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] bool contains(const std::string& needle) const;

 private:
  std::vector<std::string> warnings_;
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace hydrec
