#include "bbmb/quadrature.hpp"

#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bbmb/error.hpp"

namespace bbmb {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double tol) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
  if (!std::isfinite(value) || err > 100.0 * tol * std::max(1.0, std::abs(value))) {
    std::ostringstream os;
    os << "adaptive quadrature did not converge on [" << a << ", " << b << "]: value " << value
       << ", achieved error " << err << ", requested " << tol;
    throw QuadratureError(os.str(), err);
  }
  return {value, err};
}

}  // namespace bbmb
