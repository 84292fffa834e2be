#pragma once

// Self-check harness behind the `verify` subcommand: randomized Carnot-bound
// sweep, first-law bookkeeping, Gaussian integrity, and Gaussian-vs-Fock
// agreement.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "otto/dynamics.hpp"
#include "otto/fock_oracle.hpp"
#include "otto/gaussian.hpp"

namespace otto {

/// Deliberate defects for exercising the harness itself.
enum class Fault {
  kNone,
  /// Flips the sign of W_comp before the first-law check.
  kFlipCompressionWork,
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  std::size_t theorem_samples = 100'000;
  std::size_t cycle_samples = 16;
  std::size_t state_samples = 1'000;
  bool oracle = true;
  std::vector<double> oracle_r{0.4};
  std::vector<double> oracle_tau{0.5, 1.0, 2.0};
  IntegratorConfig integrator;
  fock::CycleConfig fock;
  Fault fault = Fault::kNone;
  unsigned jobs = 1;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const;
};

/// Deterministic for a fixed seed.
[[nodiscard]] VerifyReport run_verification(const VerifyOptions& options);

/// Random zero-mean state nu * R(phi) diag(e^{-2s}, e^{2s}) R(phi)^T with
/// nu in [1/2, max_nu], s in [0, max_squeeze], phi in [0, pi).
[[nodiscard]] CovarianceState random_squeezed_thermal(std::mt19937_64& rng, double max_nu = 5.0,
                                                      double max_squeeze = 1.5);

/// Random (omega, r, beta_h < beta_c, q_star) with omega, r and the betas
/// uniform over [1, 20], [0, 2], [0.01, 5], and q_star = 1 + 4 u^4 so that
/// engine points near Q* = 1 are well represented.
[[nodiscard]] AnalyticCycleInput random_cycle_input(std::mt19937_64& rng);

/// Largest absolute difference over per-stroke energies, entropies, entropy
/// production and cycle efficiency. Infinite when only one side is an engine.
[[nodiscard]] double max_report_deviation(const CycleReport& a, const CycleReport& b);

}  // namespace otto
