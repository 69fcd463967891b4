#include "bbmb/params.hpp"

#include <cmath>
#include <sstream>

#include "bbmb/error.hpp"

namespace bbmb {

void ModelParams::validate() const {
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(alpha) || !std::isfinite(mass)) {
    throw ConfigError("model parameters must be finite");
  }
  if (!(alpha > 1.0)) {
    std::ostringstream os;
    os << "tail exponent alpha must exceed 1, got " << alpha;
    throw ConfigError(os.str());
  }
}

}  // namespace bbmb
