#pragma once

// Finite-time simulation of the four-stroke cycle on Gaussian states.
//
// Unitary strokes ramp the pump amplitude linearly between 0 and chi_final
// while the bare frequency omega stays fixed. Covariances obey
//   d sigma / dt = A sigma + sigma A^T,   A(t) = J G(t),
// with J = [[0, 1], [-1, 0]]. Thermalization strokes replace the state with
// the Gibbs state of the current Hamiltonian.
//
// Durations are measured in bare oscillator periods 2 pi / omega.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "otto/analytic_cycle.hpp"
#include "otto/core.hpp"
#include "otto/gaussian.hpp"

namespace otto {

class StrokeDuration {
 public:
  static StrokeDuration sudden() { return StrokeDuration(0.0, true); }
  /// Throws InvalidParameter unless tau is finite and positive.
  static StrokeDuration periods(double tau);

  [[nodiscard]] bool is_sudden() const { return sudden_; }
  /// Zero for sudden strokes.
  [[nodiscard]] double periods() const { return periods_; }

  friend bool operator==(const StrokeDuration&, const StrokeDuration&) = default;

 private:
  StrokeDuration(double periods, bool sudden) : periods_(periods), sudden_(sudden) {}
  double periods_;
  bool sudden_;
};

enum class RampDirection { kCompression, kExpansion };
enum class RampProfile { kLinear };

struct RampSchedule {
  RampDirection direction = RampDirection::kCompression;
  double chi_final = 0.0;
  StrokeDuration tau = StrokeDuration::sudden();
  RampProfile profile = RampProfile::kLinear;

  /// Pump amplitude at fraction s = t/tau of the stroke, s in [0, 1].
  [[nodiscard]] double chi_at(double s) const;
  [[nodiscard]] double chi_start() const { return chi_at(0.0); }
  [[nodiscard]] double chi_end() const { return chi_at(1.0); }
};

enum class IntegrationMethod {
  /// Fourth-order Magnus on the symplectic propagator; exactly symplectic per step.
  kMagnus4,
  /// Classical Runge-Kutta on the covariance equation.
  kRungeKutta4,
  /// Magnus4 with step doubling, local error controlled by `tolerance`.
  kAdaptive,
};

struct IntegratorConfig {
  /// Step in periods (initial step for kAdaptive).
  double step = 1e-3;
  IntegrationMethod method = IntegrationMethod::kMagnus4;
  /// Per-step error bound on the propagator, kAdaptive only.
  double tolerance = 1e-12;
  std::size_t max_steps = 50'000'000;
};

/// Symplectic matrix M of the stroke, sigma -> M sigma M^T. Identity for sudden strokes.
/// Not available for kRungeKutta4, which integrates sigma directly.
[[nodiscard]] Eigen::Matrix2d stroke_propagator(const RampSchedule& schedule, Frequency omega,
                                                const IntegratorConfig& config);

/// Evolve a covariance through one unitary stroke. Throws IntegrationFailure
/// when the step budget is exhausted or the adaptive step underflows.
[[nodiscard]] CovarianceState propagate(const CovarianceState& state, const RampSchedule& schedule, Frequency omega,
                                        const IntegratorConfig& config);

/// Q* = E_final / (Omega_final * nu_initial): how far the final energy exceeds
/// the adiabatic image of an initially thermal state.
[[nodiscard]] double measure_q_star(const CovarianceState& initial_thermal, Energy final_energy,
                                    Frequency final_frequency);

/// Relative entropy of the post-stroke state to the Gibbs state the next
/// thermalization relaxes to.
[[nodiscard]] double stroke_entropy_production(const CovarianceState& state_after_unitary,
                                               InverseTemperature target_beta,
                                               const QuadraticHamiltonian& target_ham);

enum class StrokeKind { kCompression, kCooling, kExpansion, kHeating };

[[nodiscard]] const char* to_string(StrokeKind kind);

struct StrokeRecord {
  StrokeKind kind = StrokeKind::kCompression;
  Work work;
  Heat heat;
  StrokeDuration duration = StrokeDuration::sudden();
  Energy energy_before;
  Energy energy_after;
  /// Entropy of the state at the end of the stroke.
  double entropy_after = 0.0;
  /// Unitary strokes only.
  std::optional<double> q_star;
  std::optional<double> entropy_production;
};

struct CycleReport {
  std::array<StrokeRecord, 4> strokes;
  Work w_net;
  Heat q_abs;
  Efficiency efficiency;
  double eta_carnot = 0.0;
  double eta_qs = 0.0;

  [[nodiscard]] const StrokeRecord& compression() const { return strokes[0]; }
  [[nodiscard]] const StrokeRecord& cooling() const { return strokes[1]; }
  [[nodiscard]] const StrokeRecord& expansion() const { return strokes[2]; }
  [[nodiscard]] const StrokeRecord& heating() const { return strokes[3]; }

  /// Sum of works and heats; zero up to integration error.
  [[nodiscard]] double first_law_residual() const;
  /// Entropy production summed over both unitary strokes.
  [[nodiscard]] double sigma_total() const;
};

[[nodiscard]] CycleReport run_finite_time_cycle(const EngineParams& params, StrokeDuration tau,
                                                const IntegratorConfig& config);

struct TauSweepRow {
  double tau_periods = 0.0;
  std::optional<CycleReport> report;
  std::string error;
};

/// One cycle per grid point; failures are recorded per row. Rows are
/// independent and computed on up to `jobs` threads.
[[nodiscard]] std::vector<TauSweepRow> sweep_tau(const EngineParams& params, std::span<const double> tau_grid,
                                                 const IntegratorConfig& config, unsigned jobs = 1);

struct EtaMapCell {
  double r = 0.0;
  double q_star = 1.0;
  Efficiency eta;
};

/// Analytic efficiency over an (r, Q*) grid, r-major.
[[nodiscard]] std::vector<EtaMapCell> sweep_eta_map(const EngineParams& base, std::span<const double> r_grid,
                                                    std::span<const double> q_star_grid);

}  // namespace otto
