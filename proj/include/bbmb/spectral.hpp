#pragma once

#include <complex>
#include <cstddef>

#include "bbmb/fft.hpp"
#include "bbmb/grid.hpp"

namespace bbmb {

SpectralField to_spectral(const Field& f);
/// Inverse of to_spectral for Hermitian spectra (only slots 0..N/2 are read).
Field from_spectral(const SpectralField& F);

/// Applies a Fourier multiplier. The symbol is called as m(xi, nyquist) for
/// the half spectrum; at the Nyquist slot the symbol must return a value whose
/// action keeps the field real (odd parts dropped).
template <class Symbol>
Field apply_symbol(const Field& f, Symbol&& symbol) {
  const GridSpec& g = f.grid;
  RealFft fft(g.n_points);
  std::vector<std::complex<double>> spec(g.half_size());
  fft.forward(f.values, spec);
  const double inv_n = 1.0 / static_cast<double>(g.n_points);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const bool nyquist = (k == g.nyquist_index());
    spec[k] *= symbol(g.wavenumber(k), nyquist) * inv_n;
  }
  Field out(g);
  fft.inverse(spec, out.values);
  return out;
}

/// (i xi)^order, with the Nyquist slot zeroed for odd orders.
std::complex<double> derivative_symbol(double xi, int order, bool nyquist);

/// Spectral derivative of order l >= 0.
Field derivative(const Field& f, int order);

/// Primitive anchored at the left edge: P(x_j) = integral from -L to x_j.
/// The zero-mean part is integrated spectrally (exact for trigonometric
/// polynomials); the mean contributes a linear ramp.
Field cumulative_integral(const Field& f);

/// Fraction of spectral energy carried by |k| > N/3 (the band removed by the 2/3 rule).
double high_band_energy_fraction(const Field& f);

}  // namespace bbmb
