#include "otto/core.hpp"

#include <cmath>
#include <sstream>

#include "otto/bogoliubov.hpp"

namespace otto {

double EngineParams::chi() const { return chi_from_r(omega, r); }

Frequency EngineParams::pumped_frequency() const { return Frequency(omega.value() / std::cosh(2.0 * r)); }

EngineParams validate(const EngineParams& params) {
  const double omega = params.omega.value();
  const double bh = params.beta_h.value();
  const double bc = params.beta_c.value();
  if (!std::isfinite(omega) || !std::isfinite(params.r) || !std::isfinite(bh) || !std::isfinite(bc)) {
    throw InvalidParameter("engine parameters must be finite: " + describe(params));
  }
  if (omega <= 0.0) {
    throw InvalidParameter("omega must be positive: " + describe(params));
  }
  if (params.r < 0.0) {
    throw InvalidParameter("squeezing parameter r must be non-negative: " + describe(params));
  }
  if (bh <= 0.0 || bc <= 0.0) {
    throw InvalidParameter("inverse temperatures must be positive: " + describe(params));
  }
  if (bh >= bc) {
    throw InvalidOrientation("hot reservoir must be hotter than the cold one (beta_h < beta_c): " +
                             describe(params));
  }
  return params;
}

std::string describe(const EngineParams& params) {
  std::ostringstream out;
  out.precision(17);
  out << "omega=" << params.omega.value() << " r=" << params.r << " beta_h=" << params.beta_h.value()
      << " beta_c=" << params.beta_c.value();
  return out.str();
}

}  // namespace otto
