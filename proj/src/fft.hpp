#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace hydrec::detail {

/// Unnormalized in-place complex DFT of fixed length. Execution is thread-safe.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  [[nodiscard]] std::size_t size() const { return n_; }
  /// a_k <- sum_j a_j exp(-2 pi i jk/n)
  void forward(std::complex<double>* data) const;
  /// a_k <- sum_j a_j exp(+2 pi i jk/n)
  void backward(std::complex<double>* data) const;

 private:
  std::size_t n_;
  fftw_plan forward_{};
  fftw_plan backward_{};
};

}  // namespace hydrec::detail
