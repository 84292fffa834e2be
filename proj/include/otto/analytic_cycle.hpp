#pragma once

// Closed-form energetics of the fixed-frequency Otto-type cycle:
//   (i)   compression: pump switched on, H_HO -> H_SHO, thermal at beta_h
//   (ii)  cooling: thermalize with H_SHO at beta_c
//   (iii) expansion: pump switched off, H_SHO -> H_HO
//   (iv)  heating: thermalize with H_HO at beta_h
// Non-adiabaticity of the two unitary strokes enters through a single
// Husimi parameter q_star >= 1.

#include <optional>

#include "otto/core.hpp"

namespace otto {

/// Efficiency -W_net/Q_abs, or empty when the cycle is not an engine.
using Efficiency = std::optional<double>;

struct AnalyticCycleInput {
  EngineParams params;
  double q_star = 1.0;
};

struct AnalyticCycleOutput {
  Work w_exp;
  Work w_comp;
  Heat q_h;
  Heat q_c;
  Work w_net;
  /// Set iff w_net < 0 (which forces q_h > 0 and q_c < 0).
  Efficiency efficiency;
  /// 1 - (Omega/omega) F evaluated whether or not the cycle is an engine.
  double efficiency_formula = 0.0;
  double eta_carnot = 0.0;
};

/// Stroke works and heats for the given Q*. Throws InvalidParameter on
/// invalid params or q_star < 1.
[[nodiscard]] AnalyticCycleOutput stroke_energetics(const AnalyticCycleInput& input);

/// 1 - Omega/omega = 1 - sech(2r).
[[nodiscard]] double eta_quasistatic(const EngineParams& params);

/// True when the quasi-static cycle runs as an engine, 0 < r <= r_max.
[[nodiscard]] bool quasistatic_engine(const EngineParams& params);

/// Largest squeezing with W_net <= 0 at Q* = 1: (1/2) arccosh(beta_c/beta_h).
[[nodiscard]] double r_max(const EngineParams& params);

[[nodiscard]] double eta_carnot(const EngineParams& params);

/// 1 - sqrt(beta_h/beta_c): efficiency at maximum work over r, high temperature, Q* = 1.
[[nodiscard]] double eta_curzon_ahlborn(const EngineParams& params);

/// 1 - sqrt(beta_h Omega / 2). Meaningful only for beta_c Omega / 2 >> 1 and
/// small beta_h; the regime is not enforced.
[[nodiscard]] double eta_maxpower_low_temperature(const EngineParams& params);

/// Husimi parameter of a sudden frequency switch, (w1^2 + w2^2) / (2 w1 w2).
[[nodiscard]] double q_star_sudden(Frequency first, Frequency second);

/// (1 - k)/(2 + k) with k = sqrt(beta_h/beta_c).
[[nodiscard]] double eta_sudden_high_temperature(const EngineParams& params);

/// (1 - k)/(2 + k) with k = sqrt(beta_h Omega / 2).
[[nodiscard]] double eta_sudden_low_temperature(const EngineParams& params);

inline constexpr double kCarnotTolerance = 1e-12;

/// Numerical witness for eta <= eta_Carnot, including the intermediate
/// steps of the argument: the engine condition forces
/// beta_h/beta_c <= Omega/omega, the ratio F is at least one, and
/// eta <= 1 - (beta_h/beta_c) F <= eta_Carnot.
struct CarnotWitness {
  bool engine = false;
  double eta = 0.0;
  double eta_carnot = 0.0;
  /// 1 - (beta_h/beta_c) F.
  double intermediate_bound = 0.0;
  double ratio_f = 1.0;
  bool gap_ordering = true;
  bool ratio_at_least_one = true;
  bool bound_chain = true;

  [[nodiscard]] bool holds() const {
    return !engine || (eta <= eta_carnot + kCarnotTolerance && gap_ordering && ratio_at_least_one && bound_chain);
  }
};

[[nodiscard]] CarnotWitness verify_carnot_bound(const AnalyticCycleInput& input);

}  // namespace otto
