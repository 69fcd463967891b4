#include "bbmb/grid.hpp"

#include <algorithm>
#include <sstream>

#include "bbmb/error.hpp"

namespace bbmb {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

std::vector<double> GridSpec::nodes() const {
  std::vector<double> xs(n_points);
  for (std::size_t j = 0; j < n_points; ++j) xs[j] = x(j);
  return xs;
}

GridSpec make_grid(double half_width, std::size_t n_points) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    std::ostringstream os;
    os << "grid half width must be positive and finite, got " << half_width;
    throw ConfigError(os.str());
  }
  if (!is_power_of_two(n_points) || n_points < 16) {
    std::ostringstream os;
    os << "grid size must be a power of two >= 16, got " << n_points;
    throw ConfigError(os.str());
  }
  return GridSpec{half_width, n_points};
}

Field::Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n_points) throw ConfigError("field size does not match grid");
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw ConfigError("fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid, other.grid);
  for (std::size_t j = 0; j < values.size(); ++j) values[j] += other.values[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid, other.grid);
  for (std::size_t j = 0; j < values.size(); ++j) values[j] -= other.values[j];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

}  // namespace bbmb
