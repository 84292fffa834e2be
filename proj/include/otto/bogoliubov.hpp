#pragma once

// Bogoliubov diagonalization of
//   H = omega (a^dag a + 1/2) + chi (a^dag^2 + a^2)
// into Omega (b^dag b + 1/2) with b = mu a + nu a^dag.

#include "otto/core.hpp"

namespace otto {

/// Real, non-negative mode-mixing coefficients; mu^2 - nu^2 = 1.
struct BogoliubovCoeffs {
  double mu = 1.0;
  double nu = 0.0;
};

/// (omega/2) tanh(2r). Lies in [0, omega/2) for finite r >= 0.
[[nodiscard]] double chi_from_r(Frequency omega, double r);

/// Omega = omega sqrt(1 - (2 chi/omega)^2). Throws UnstablePump unless 0 <= chi < omega/2.
[[nodiscard]] Frequency effective_frequency(Frequency omega, double chi);

/// mu = cosh(theta), nu = sinh(theta) with tanh(2 theta) = 2 chi / omega.
/// Substituting a = mu b - nu b^dag removes the b^2 and b^dag^2 terms.
[[nodiscard]] BogoliubovCoeffs coefficients(Frequency omega, double chi);

}  // namespace otto
