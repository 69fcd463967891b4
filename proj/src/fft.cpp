#include "bbmb/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "bbmb/error.hpp"

namespace bbmb {

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution with new arrays is. Plans are
// kept for the lifetime of the process.
PlanPair plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  auto* real = fftw_alloc_real(n);
  auto* cplx = fftw_alloc_complex(n / 2 + 1);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  PlanPair p{fftw_plan_dft_r2c_1d(len, real, cplx, flags),
             fftw_plan_dft_c2r_1d(len, cplx, real, flags)};
  fftw_free(real);
  fftw_free(cplx);
  if (p.forward == nullptr || p.inverse == nullptr) throw Error("FFTW planning failed", ExitCode::config_error);
  cache.emplace(n, p);
  return p;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n), real_scratch_(n), complex_scratch_(n / 2 + 1) {
  const PlanPair p = plans_for(n);
  forward_plan_ = p.forward;
  inverse_plan_ = p.inverse;
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != half_size()) throw ConfigError("RealFft::forward: size mismatch");
  // r2c does not modify its input, but the interface takes a non-const pointer.
  std::copy(in.begin(), in.end(), real_scratch_.begin());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(const_cast<void*>(forward_plan_)), real_scratch_.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  if (in.size() != half_size() || out.size() != n_) throw ConfigError("RealFft::inverse: size mismatch");
  std::copy(in.begin(), in.end(), complex_scratch_.begin());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(const_cast<void*>(inverse_plan_)),
                       reinterpret_cast<fftw_complex*>(complex_scratch_.data()), out.data());
}

}  // namespace bbmb
