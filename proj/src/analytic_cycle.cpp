#include "otto/analytic_cycle.hpp"

#include <cmath>

namespace otto {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

struct Thermal {
  double omega;
  double ratio;     // Omega / omega
  double big_omega;
  double coth_hot;  // coth(beta_h omega / 2)
  double coth_cold; // coth(beta_c Omega / 2)
};

Thermal thermal_factors(const EngineParams& params) {
  Thermal t{};
  t.omega = params.omega.value();
  t.ratio = 1.0 / std::cosh(2.0 * params.r);
  t.big_omega = t.omega * t.ratio;
  t.coth_hot = coth(0.5 * params.beta_h.value() * t.omega);
  t.coth_cold = coth(0.5 * params.beta_c.value() * t.big_omega);
  return t;
}

// F of the efficiency 1 - (Omega/omega) F.
double ratio_f(const Thermal& t, double q) {
  return (t.coth_cold - q * t.coth_hot) / (q * t.coth_cold - t.coth_hot);
}

}  // namespace

AnalyticCycleOutput stroke_energetics(const AnalyticCycleInput& input) {
  const EngineParams params = validate(input.params);
  const double q = input.q_star;
  if (!std::isfinite(q) || q < 1.0) {
    throw InvalidParameter("Husimi parameter must satisfy q_star >= 1");
  }
  const Thermal t = thermal_factors(params);

  AnalyticCycleOutput out;
  out.w_exp = Work(0.5 * (q * t.omega - t.big_omega) * t.coth_cold);
  out.w_comp = Work(-0.5 * (t.omega - q * t.big_omega) * t.coth_hot);
  out.q_h = Heat(0.5 * t.omega * (t.coth_hot - q * t.coth_cold));
  out.q_c = Heat(-0.5 * t.big_omega * (q * t.coth_hot - t.coth_cold));
  out.w_net = out.w_exp + out.w_comp;
  out.efficiency_formula = 1.0 - t.ratio * ratio_f(t, q);
  out.eta_carnot = eta_carnot(params);
  if (out.w_net.value() < 0.0 && out.q_h.value() > 0.0) {
    out.efficiency = out.efficiency_formula;
  }
  return out;
}

double eta_quasistatic(const EngineParams& params) { return 1.0 - 1.0 / std::cosh(2.0 * params.r); }

bool quasistatic_engine(const EngineParams& params) { return params.r > 0.0 && params.r <= r_max(params); }

double r_max(const EngineParams& params) {
  const double ratio = params.beta_c.value() / params.beta_h.value();
  if (!(ratio > 1.0)) {
    throw InvalidOrientation("r_max requires beta_c > beta_h");
  }
  return 0.5 * std::acosh(ratio);
}

double eta_carnot(const EngineParams& params) { return 1.0 - params.beta_h.value() / params.beta_c.value(); }

double eta_curzon_ahlborn(const EngineParams& params) {
  return 1.0 - std::sqrt(params.beta_h.value() / params.beta_c.value());
}

double eta_maxpower_low_temperature(const EngineParams& params) {
  return 1.0 - std::sqrt(0.5 * params.beta_h.value() * params.pumped_frequency().value());
}

double q_star_sudden(Frequency first, Frequency second) {
  const double a = first.value();
  const double b = second.value();
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidParameter("q_star_sudden needs positive frequencies");
  }
  return (a * a + b * b) / (2.0 * a * b);
}

double eta_sudden_high_temperature(const EngineParams& params) {
  const double k = std::sqrt(params.beta_h.value() / params.beta_c.value());
  return (1.0 - k) / (2.0 + k);
}

double eta_sudden_low_temperature(const EngineParams& params) {
  const double k = std::sqrt(0.5 * params.beta_h.value() * params.pumped_frequency().value());
  return (1.0 - k) / (2.0 + k);
}

CarnotWitness verify_carnot_bound(const AnalyticCycleInput& input) {
  const AnalyticCycleOutput out = stroke_energetics(input);
  CarnotWitness w;
  w.eta_carnot = out.eta_carnot;
  w.eta = out.efficiency_formula;
  w.engine = out.efficiency.has_value();
  if (!w.engine) {
    return w;
  }
  const Thermal t = thermal_factors(input.params);
  const double temperature_ratio = input.params.beta_h.value() / input.params.beta_c.value();
  w.ratio_f = ratio_f(t, input.q_star);
  w.intermediate_bound = 1.0 - temperature_ratio * w.ratio_f;
  w.gap_ordering = temperature_ratio <= t.ratio + kCarnotTolerance;
  w.ratio_at_least_one = w.ratio_f >= 1.0 - kCarnotTolerance;
  w.bound_chain = w.eta <= w.intermediate_bound + kCarnotTolerance &&
                  w.intermediate_bound <= w.eta_carnot + kCarnotTolerance;
  return w;
}

}  // namespace otto
