#include "otto/gaussian.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "otto/bogoliubov.hpp"

namespace otto {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

// ln(2 sinh x) for x > 0 without overflow.
double log_two_sinh(double x) { return x + std::log(-std::expm1(-2.0 * x)); }

void require_positive_beta(InverseTemperature beta) {
  if (!(beta.value() > 0.0)) {
    throw InvalidParameter("inverse temperature must be positive");
  }
}

}  // namespace

QuadraticHamiltonian::QuadraticHamiltonian(Frequency omega, double chi)
    : omega_(omega), chi_(chi), normal_frequency_(effective_frequency(omega, chi)) {}

Eigen::Matrix2d QuadraticHamiltonian::quadrature_matrix() const {
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  g(0, 0) = omega_.value() + 2.0 * chi_;
  g(1, 1) = omega_.value() - 2.0 * chi_;
  return g;
}

void require_physical(const CovarianceState& state) {
  const Eigen::Matrix2d& s = state.sigma;
  if (!s.allFinite() || !state.mean.allFinite()) {
    throw UnphysicalState("covariance state has non-finite entries");
  }
  if (std::abs(s(0, 1) - s(1, 0)) > 1e-12 * (std::abs(s(0, 1)) + 1.0)) {
    throw UnphysicalState("covariance matrix is not symmetric");
  }
  if (!state.mean.isZero(0.0)) {
    throw UnphysicalState("only zero-mean states are supported");
  }
  if (s(0, 0) <= 0.0 || s(1, 1) <= 0.0) {
    throw UnphysicalState("covariance matrix is not positive definite");
  }
  const double nu = symplectic_eigenvalue(state);
  if (!(nu >= 0.5 - kHeisenbergTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "symplectic eigenvalue " << nu << " violates the uncertainty bound 1/2";
    throw UnphysicalState(msg.str());
  }
}

double symplectic_eigenvalue(const CovarianceState& state) {
  const double det = state.sigma.determinant();
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

CovarianceState thermal_state(const QuadraticHamiltonian& ham, InverseTemperature beta) {
  require_positive_beta(beta);
  const double big = ham.omega().value() + 2.0 * ham.chi();
  const double small = ham.omega().value() - 2.0 * ham.chi();
  const double nu = 0.5 * coth(0.5 * beta.value() * ham.normal_frequency().value());
  CovarianceState state;
  state.sigma << nu * std::sqrt(small / big), 0.0, 0.0, nu * std::sqrt(big / small);
  return state;
}

Energy mean_energy(const CovarianceState& state, const QuadraticHamiltonian& ham) {
  require_physical(state);
  return Energy(0.5 * (ham.quadrature_matrix() * state.sigma).trace());
}

double von_neumann_entropy(const CovarianceState& state) {
  require_physical(state);
  const double occupation = symplectic_eigenvalue(state) - 0.5;
  if (occupation <= 0.0) {
    return 0.0;
  }
  return (occupation + 1.0) * std::log1p(occupation) - occupation * std::log(occupation);
}

double log_partition(const QuadraticHamiltonian& ham, InverseTemperature beta) {
  require_positive_beta(beta);
  return -log_two_sinh(0.5 * beta.value() * ham.normal_frequency().value());
}

double relative_entropy_to_thermal(const CovarianceState& state, const QuadraticHamiltonian& ham,
                                   InverseTemperature beta) {
  const double entropy = von_neumann_entropy(state);
  const double energy_term = beta.value() * mean_energy(state, ham).value();
  const double ln_z = log_partition(ham, beta);
  const double d = -entropy + energy_term + ln_z;
  // Cancellation at the fixed point can leave a rounding-level negative.
  const double rounding =
      64.0 * std::numeric_limits<double>::epsilon() * (entropy + std::abs(energy_term) + std::abs(ln_z));
  return (d < 0.0 && d > -rounding) ? 0.0 : d;
}

Work friction_work(double relative_entropy, InverseTemperature beta) {
  require_positive_beta(beta);
  if (relative_entropy < 0.0) {
    throw InvalidParameter("relative entropy must be non-negative");
  }
  return Work(relative_entropy / beta.value());
}

}  // namespace otto
