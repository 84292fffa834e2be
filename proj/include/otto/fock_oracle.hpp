#pragma once

// Brute-force reference backend in a truncated number basis {|0>, ..., |dim-1>}.
//
// Everything here is computed from dense matrices of a, a^dag and the
// Hamiltonian omega (a^dag a + 1/2) + chi (a^dag^2 + a^2); nothing is taken
// from the Gaussian formulas. It exists to cross-check the covariance backend.

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "otto/core.hpp"
#include "otto/dynamics.hpp"

namespace otto::fock {

struct FockOperator {
  Eigen::MatrixXcd matrix;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct FockState {
  Eigen::MatrixXcd rho;
  /// ln(rho), kept for Gibbs states whose high-level populations underflow.
  std::optional<Eigen::MatrixXcd> log_rho;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
};

/// Populations of the top levels that count towards the tail weight.
inline constexpr std::size_t kTailLevels = 10;
inline constexpr double kTailTolerance = 1e-12;

[[nodiscard]] FockOperator annihilation(std::size_t dim);

/// omega (a^dag a + 1/2) + chi (a^dag^2 + a^2) truncated at dim levels.
[[nodiscard]] FockOperator build_hamiltonian(Frequency omega, double chi, std::size_t dim);

/// Sorted eigenvalues of a Hermitian operator.
[[nodiscard]] Eigen::VectorXd spectrum(const FockOperator& op);

/// exp(-beta H)/Z by eigendecomposition. beta may be +infinity (ground state).
/// Throws CutoffTooSmall when the tail weight exceeds kTailTolerance.
[[nodiscard]] FockState gibbs_state(const FockOperator& ham, InverseTemperature beta);

/// Summed population of the top kTailLevels levels.
[[nodiscard]] double tail_weight(const FockState& state);

/// Re tr(rho op).
[[nodiscard]] double expectation(const FockState& state, const FockOperator& op);

[[nodiscard]] double purity(const FockState& state);

[[nodiscard]] double von_neumann_entropy(const FockState& state);

/// tr(rho ln rho) - tr(rho ln sigma). Throws InvalidParameter when sigma is
/// rank deficient and carries no log_rho.
[[nodiscard]] double relative_entropy(const FockState& rho, const FockState& sigma);

struct PropagationConfig {
  /// Magnus step in periods; every stroke takes at least kMinStrokeSteps steps.
  double step = 1.0 / 128.0;
  /// Levels added whenever the top kTailLevels levels gain weight above kGrowthThreshold.
  std::size_t dim_increment = 20;
  /// Largest cutoff the basis may grow to; 0 keeps the input cutoff.
  std::size_t max_dim = 0;
};

inline constexpr std::size_t kMinStrokeSteps = 256;
inline constexpr double kGrowthThreshold = 1e-14;

/// Von Neumann evolution through one unitary stroke with a fourth-order
/// Magnus exponential per step. The result may live in a larger basis than
/// the input. Throws CutoffTooSmall when the state reaches the top of the
/// largest allowed basis.
[[nodiscard]] FockState propagate(const FockState& state, const RampSchedule& schedule, Frequency omega,
                                  const PropagationConfig& config);

struct CycleConfig {
  std::size_t initial_dim = 80;
  std::size_t dim_increment = 20;
  std::size_t max_dim = 800;
  /// Magnus step in periods.
  double step = 1.0 / 128.0;
};

struct CycleResult {
  CycleReport report;
  /// Largest cutoff reached during the cycle.
  std::size_t dim = 0;
};

/// The four-stroke cycle on density matrices. The cutoff starts at
/// initial_dim and is raised by dim_increment wherever a Gibbs state or an
/// evolving state needs more levels.
[[nodiscard]] CycleResult run_cycle(const EngineParams& params, StrokeDuration tau, const CycleConfig& config);

}  // namespace otto::fock
