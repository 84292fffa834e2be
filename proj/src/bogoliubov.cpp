#include "otto/bogoliubov.hpp"

#include <cmath>
#include <sstream>

namespace otto {

namespace {

// 2 chi / omega, checked against the stability window.
double pump_ratio(Frequency omega, double chi) {
  if (!(omega.value() > 0.0)) {
    throw InvalidParameter("omega must be positive");
  }
  const double ratio = 2.0 * chi / omega.value();
  if (!(ratio >= 0.0) || ratio >= 1.0) {
    std::ostringstream msg;
    msg << "pump amplitude chi=" << chi << " outside [0, omega/2) for omega=" << omega.value();
    throw UnstablePump(msg.str());
  }
  return ratio;
}

}  // namespace

double chi_from_r(Frequency omega, double r) {
  if (!(omega.value() > 0.0) || !(r >= 0.0)) {
    throw InvalidParameter("chi_from_r needs omega > 0 and r >= 0");
  }
  return 0.5 * omega.value() * std::tanh(2.0 * r);
}

Frequency effective_frequency(Frequency omega, double chi) {
  const double ratio = pump_ratio(omega, chi);
  // (1 - x)(1 + x) keeps precision near the instability edge.
  return Frequency(omega.value() * std::sqrt((1.0 - ratio) * (1.0 + ratio)));
}

BogoliubovCoeffs coefficients(Frequency omega, double chi) {
  const double ratio = pump_ratio(omega, chi);
  if (ratio == 0.0) {
    return {};
  }
  const double theta = 0.5 * std::atanh(ratio);
  return {std::cosh(theta), std::sinh(theta)};
}

}  // namespace otto
