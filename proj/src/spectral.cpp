#include "bbmb/spectral.hpp"

#include <cmath>

#include "bbmb/error.hpp"

namespace bbmb {

SpectralField to_spectral(const Field& f) {
  const GridSpec& g = f.grid;
  const std::size_t n = g.n_points;
  RealFft fft(n);
  std::vector<std::complex<double>> half(g.half_size());
  fft.forward(f.values, half);
  SpectralField out{g, std::vector<std::complex<double>>(n)};
  for (std::size_t k = 0; k < half.size(); ++k) out.coefficients[k] = half[k];
  for (std::size_t k = half.size(); k < n; ++k) out.coefficients[k] = std::conj(half[n - k]);
  return out;
}

Field from_spectral(const SpectralField& F) {
  const GridSpec& g = F.grid;
  if (F.coefficients.size() != g.n_points) throw ConfigError("spectral field size does not match grid");
  RealFft fft(g.n_points);
  std::vector<std::complex<double>> half(F.coefficients.begin(),
                                         F.coefficients.begin() + static_cast<std::ptrdiff_t>(g.half_size()));
  const double inv_n = 1.0 / static_cast<double>(g.n_points);
  for (auto& c : half) c *= inv_n;
  Field out(g);
  fft.inverse(half, out.values);
  return out;
}

std::complex<double> derivative_symbol(double xi, int order, bool nyquist) {
  if (order == 0) return 1.0;
  if (nyquist && order % 2 == 1) return 0.0;
  std::complex<double> s = 1.0;
  const std::complex<double> ixi(0.0, xi);
  for (int i = 0; i < order; ++i) s *= ixi;
  return s;
}

Field derivative(const Field& f, int order) {
  if (order < 0) throw ConfigError("derivative order must be nonnegative");
  if (order == 0) return f;
  return apply_symbol(f, [order](double xi, bool nyq) { return derivative_symbol(xi, order, nyq); });
}

Field cumulative_integral(const Field& f) {
  const GridSpec& g = f.grid;
  double sum = 0.0;
  for (double v : f.values) sum += v;
  const double mean = sum / static_cast<double>(g.n_points);

  Field primitive = apply_symbol(f, [](double xi, bool nyq) -> std::complex<double> {
    if (xi == 0.0 || nyq) return 0.0;
    return 1.0 / std::complex<double>(0.0, xi);
  });
  const double anchor = primitive.values[0];
  for (std::size_t j = 0; j < g.n_points; ++j) {
    primitive.values[j] += mean * (g.x(j) + g.half_width) - anchor;
  }
  return primitive;
}

double high_band_energy_fraction(const Field& f) {
  const GridSpec& g = f.grid;
  RealFft fft(g.n_points);
  std::vector<std::complex<double>> half(g.half_size());
  fft.forward(f.values, half);
  const auto cutoff = static_cast<std::ptrdiff_t>(g.n_points / 3);
  double total = 0.0;
  double high = 0.0;
  for (std::size_t k = 0; k < half.size(); ++k) {
    // interior slots stand for both +k and -k
    const double w = (k == 0 || k == g.nyquist_index()) ? 1.0 : 2.0;
    const double e = w * std::norm(half[k]);
    total += e;
    if (std::abs(g.mode(k)) > cutoff) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace bbmb
