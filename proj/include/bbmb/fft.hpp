#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace bbmb {

/// Real-to-complex FFT of fixed length backed by FFTW.
///
/// Plans are created once per length in a process-wide cache guarded by a
/// mutex; execution uses the new-array interface, so distinct RealFft objects
/// may be used from different threads. A single object is not thread-safe
/// (it owns a scratch buffer for the destructive c2r transform).
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t half_size() const { return n_ / 2 + 1; }

  /// Unnormalized forward transform into n/2+1 coefficients.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// Unnormalized inverse (no 1/n factor) from n/2+1 coefficients.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t n_;
  const void* forward_plan_;
  const void* inverse_plan_;
  std::vector<double> real_scratch_;
  std::vector<std::complex<double>> complex_scratch_;
};

}  // namespace bbmb
