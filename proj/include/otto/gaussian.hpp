#pragma once

// Single-mode Gaussian states of the pumped oscillator.
//
// Quadratures x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)). In these
// coordinates H = omega (a^dag a + 1/2) + chi (a^dag^2 + a^2) reads
// H = (1/2) R^T G R with G = diag(omega + 2 chi, omega - 2 chi), R = (x, p).
// Covariances use sigma_ij = <R_i R_j + R_j R_i>/2 - <R_i><R_j>, so the
// vacuum has sigma = I/2 and the symplectic eigenvalue is sqrt(det sigma).

#include <Eigen/Core>

#include "otto/core.hpp"

namespace otto {

class QuadraticHamiltonian {
 public:
  /// Throws UnstablePump unless 0 <= chi < omega/2.
  QuadraticHamiltonian(Frequency omega, double chi);

  static QuadraticHamiltonian bare(Frequency omega) { return {omega, 0.0}; }
  /// Pump on at the amplitude derived from params.r.
  static QuadraticHamiltonian pumped(const EngineParams& params) { return {params.omega, params.chi()}; }

  [[nodiscard]] Frequency omega() const { return omega_; }
  [[nodiscard]] double chi() const { return chi_; }
  [[nodiscard]] Eigen::Matrix2d quadrature_matrix() const;
  /// sqrt(det G), identical to the Bogoliubov frequency.
  [[nodiscard]] Frequency normal_frequency() const { return normal_frequency_; }

 private:
  Frequency omega_;
  double chi_;
  Frequency normal_frequency_;
};

struct CovarianceState {
  Eigen::Matrix2d sigma = 0.5 * Eigen::Matrix2d::Identity();
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();

  static CovarianceState vacuum() { return {}; }
};

inline constexpr double kHeisenbergTolerance = 1e-12;

/// Throws UnphysicalState for asymmetric sigma, nonzero mean, or
/// sqrt(det sigma) < 1/2 - kHeisenbergTolerance.
void require_physical(const CovarianceState& state);

[[nodiscard]] double symplectic_eigenvalue(const CovarianceState& state);

/// Gibbs state exp(-beta H)/Z. beta may be +infinity (ground state).
[[nodiscard]] CovarianceState thermal_state(const QuadraticHamiltonian& ham, InverseTemperature beta);

/// (1/2) tr(G sigma).
[[nodiscard]] Energy mean_energy(const CovarianceState& state, const QuadraticHamiltonian& ham);

/// Entropy in nats from the symplectic eigenvalue.
[[nodiscard]] double von_neumann_entropy(const CovarianceState& state);

/// ln Z = -ln(2 sinh(beta Omega / 2)).
[[nodiscard]] double log_partition(const QuadraticHamiltonian& ham, InverseTemperature beta);

/// D(state || exp(-beta H)/Z) = -S(state) + beta E(state) + ln Z.
[[nodiscard]] double relative_entropy_to_thermal(const CovarianceState& state, const QuadraticHamiltonian& ham,
                                                 InverseTemperature beta);

/// Work lost to a relaxation with relative entropy D at inverse temperature beta: D / beta.
[[nodiscard]] Work friction_work(double relative_entropy, InverseTemperature beta);

}  // namespace otto
