#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace bbmb {

/// Uniform periodic grid on [-L, L) with N points.
///
/// Wavenumbers follow the FFT storage order: slot k holds the mode
/// k for k < N/2 and k - N otherwise, so slot N/2 is the Nyquist mode
/// with xi = -pi N / (2 L).
struct GridSpec {
  double half_width = 0.0;
  std::size_t n_points = 0;

  double dx() const { return 2.0 * half_width / static_cast<double>(n_points); }
  double length() const { return 2.0 * half_width; }
  double x(std::size_t j) const { return -half_width + static_cast<double>(j) * dx(); }

  std::ptrdiff_t mode(std::size_t k) const {
    const auto n = static_cast<std::ptrdiff_t>(n_points);
    const auto kk = static_cast<std::ptrdiff_t>(k);
    return kk < n / 2 ? kk : kk - n;
  }
  double wavenumber(std::size_t k) const {
    return std::numbers::pi * static_cast<double>(mode(k)) / half_width;
  }
  std::size_t nyquist_index() const { return n_points / 2; }
  /// Length of the r2c half spectrum.
  std::size_t half_size() const { return n_points / 2 + 1; }

  std::vector<double> nodes() const;

  bool operator==(const GridSpec&) const = default;
};

/// Validates N (power of two, N >= 16) and L > 0.
GridSpec make_grid(double half_width, std::size_t n_points);

/// Real samples of a function on a grid.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g), values(g.n_points, 0.0) {}
  Field(const GridSpec& g, std::vector<double> v);

  template <class F>
  static Field sample(const GridSpec& g, F&& f) {
    Field out(g);
    for (std::size_t j = 0; j < g.n_points; ++j) out.values[j] = f(g.x(j));
    return out;
  }

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t j) { return values[j]; }
  double operator[](std::size_t j) const { return values[j]; }
  std::span<const double> view() const { return values; }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Full length-N spectrum in FFT storage order, unnormalized forward transform
/// F_k = sum_j f_j exp(-2 pi i j k / N).
struct SpectralField {
  GridSpec grid;
  std::vector<std::complex<double>> coefficients;
};

/// Throws ConfigError when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b);

}  // namespace bbmb
