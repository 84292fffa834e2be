#include "otto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace otto {

namespace {

using Mat2 = Eigen::Matrix2d;

// Generator A = J G for pump amplitude chi.
Mat2 generator(double omega, double chi) {
  Mat2 a;
  a << 0.0, omega - 2.0 * chi, -(omega + 2.0 * chi), 0.0;
  return a;
}

// exp(X) for traceless 2x2 X, using X^2 = -det(X) I. The result has unit
// determinant up to rounding.
Mat2 expm_traceless(const Mat2& x) {
  const double q2 = -x.determinant();
  double c = 1.0;
  double s = 1.0;
  if (std::abs(q2) < 1e-6) {
    // Taylor terms through q^6 keep full precision in this window.
    c = 1.0 + q2 / 2.0 * (1.0 + q2 / 12.0 * (1.0 + q2 / 30.0));
    s = 1.0 + q2 / 6.0 * (1.0 + q2 / 20.0 * (1.0 + q2 / 42.0));
  } else if (q2 > 0.0) {
    const double q = std::sqrt(q2);
    c = std::cosh(q);
    s = std::sinh(q) / q;
  } else {
    const double q = std::sqrt(-q2);
    c = std::cos(q);
    s = std::sin(q) / q;
  }
  return c * Mat2::Identity() + s * x;
}

struct StrokeGeometry {
  double omega;
  double duration;  // time units
};

StrokeGeometry geometry(const RampSchedule& schedule, Frequency omega) {
  if (!(omega.value() > 0.0)) {
    throw InvalidParameter("omega must be positive");
  }
  for (double chi : {schedule.chi_start(), schedule.chi_end()}) {
    if (!(chi >= 0.0) || 2.0 * chi >= omega.value()) {
      throw UnstablePump("ramp leaves the stable window 0 <= chi < omega/2");
    }
  }
  const double period = 2.0 * kPi / omega.value();
  return {omega.value(), schedule.tau.periods() * period};
}

std::size_t fixed_step_count(const StrokeGeometry& g, const IntegratorConfig& config) {
  if (!(config.step > 0.0) || !std::isfinite(config.step)) {
    throw InvalidParameter("integrator step must be positive");
  }
  const double period = 2.0 * kPi / g.omega;
  const double n = std::ceil(g.duration / (config.step * period) - 1e-9);
  if (n > static_cast<double>(config.max_steps)) {
    std::ostringstream msg;
    msg << "stroke needs " << n << " steps, above max_steps=" << config.max_steps;
    throw IntegrationFailure(msg.str());
  }
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

// One Magnus-4 step over [t, t + h] with Gauss-Legendre nodes.
Mat2 magnus_step(const RampSchedule& schedule, const StrokeGeometry& g, double t, double h) {
  constexpr double kNode = 0.28867513459481288225;  // sqrt(3)/6
  constexpr double kCommutator = 0.14433756729740644113;  // sqrt(3)/12
  const Mat2 a1 = generator(g.omega, schedule.chi_at((t + (0.5 - kNode) * h) / g.duration));
  const Mat2 a2 = generator(g.omega, schedule.chi_at((t + (0.5 + kNode) * h) / g.duration));
  const Mat2 exponent = 0.5 * h * (a1 + a2) + kCommutator * h * h * (a2 * a1 - a1 * a2);
  return expm_traceless(exponent);
}

Mat2 magnus_fixed(const RampSchedule& schedule, const StrokeGeometry& g, std::size_t steps) {
  const double h = g.duration / static_cast<double>(steps);
  Mat2 m = Mat2::Identity();
  for (std::size_t k = 0; k < steps; ++k) {
    m = magnus_step(schedule, g, static_cast<double>(k) * h, h) * m;
  }
  return m;
}

Mat2 magnus_adaptive(const RampSchedule& schedule, const StrokeGeometry& g, const IntegratorConfig& config) {
  if (!(config.tolerance > 0.0)) {
    throw InvalidParameter("adaptive tolerance must be positive");
  }
  const double period = 2.0 * kPi / g.omega;
  double h = std::min(config.step * period, g.duration);
  const double min_step = 1e-14 * std::max(g.duration, period);
  Mat2 m = Mat2::Identity();
  double t = 0.0;
  std::size_t attempts = 0;
  while (t < g.duration) {
    if (++attempts > config.max_steps) {
      throw IntegrationFailure("adaptive integration exceeded max_steps");
    }
    h = std::min(h, g.duration - t);
    if (h < min_step) {
      throw IntegrationFailure("adaptive step size underflow");
    }
    const Mat2 full = magnus_step(schedule, g, t, h);
    const Mat2 half = magnus_step(schedule, g, t + 0.5 * h, 0.5 * h) * magnus_step(schedule, g, t, 0.5 * h);
    // Richardson estimate for a fourth-order method.
    const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
    const double scale = std::max(1.0, half.cwiseAbs().maxCoeff());
    if (err <= config.tolerance * scale) {
      m = half * m;
      t += h;
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(config.tolerance * scale / err, 0.2) : 4.0;
    h *= std::clamp(factor, 0.2, 4.0);
  }
  return m;
}

Mat2 covariance_rhs(const Mat2& a, const Mat2& sigma) { return a * sigma + sigma * a.transpose(); }

Mat2 runge_kutta_fixed(const RampSchedule& schedule, const StrokeGeometry& g, std::size_t steps, Mat2 sigma) {
  const double h = g.duration / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const Mat2 a0 = generator(g.omega, schedule.chi_at(t / g.duration));
    const Mat2 am = generator(g.omega, schedule.chi_at((t + 0.5 * h) / g.duration));
    const Mat2 a1 = generator(g.omega, schedule.chi_at((t + h) / g.duration));
    const Mat2 k1 = covariance_rhs(a0, sigma);
    const Mat2 k2 = covariance_rhs(am, sigma + 0.5 * h * k1);
    const Mat2 k3 = covariance_rhs(am, sigma + 0.5 * h * k2);
    const Mat2 k4 = covariance_rhs(a1, sigma + h * k3);
    sigma += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return 0.5 * (sigma + sigma.transpose());
}

}  // namespace

StrokeDuration StrokeDuration::periods(double tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw InvalidParameter("stroke duration must be finite and positive");
  }
  return StrokeDuration(tau, false);
}

double RampSchedule::chi_at(double s) const {
  s = std::clamp(s, 0.0, 1.0);
  switch (direction) {
    case RampDirection::kCompression:
      return chi_final * s;
    case RampDirection::kExpansion:
      return chi_final * (1.0 - s);
  }
  return 0.0;
}

Eigen::Matrix2d stroke_propagator(const RampSchedule& schedule, Frequency omega, const IntegratorConfig& config) {
  const StrokeGeometry g = geometry(schedule, omega);
  if (schedule.tau.is_sudden()) {
    return Mat2::Identity();
  }
  switch (config.method) {
    case IntegrationMethod::kMagnus4:
      return magnus_fixed(schedule, g, fixed_step_count(g, config));
    case IntegrationMethod::kAdaptive:
      return magnus_adaptive(schedule, g, config);
    case IntegrationMethod::kRungeKutta4:
      break;
  }
  throw InvalidParameter("stroke_propagator is not defined for the Runge-Kutta method");
}

CovarianceState propagate(const CovarianceState& state, const RampSchedule& schedule, Frequency omega,
                          const IntegratorConfig& config) {
  require_physical(state);
  const StrokeGeometry g = geometry(schedule, omega);
  if (schedule.tau.is_sudden()) {
    return state;
  }
  CovarianceState out = state;
  if (config.method == IntegrationMethod::kRungeKutta4) {
    out.sigma = runge_kutta_fixed(schedule, g, fixed_step_count(g, config), state.sigma);
  } else {
    const Mat2 m = stroke_propagator(schedule, omega, config);
    out.sigma = m * state.sigma * m.transpose();
    out.sigma = 0.5 * (out.sigma + out.sigma.transpose()).eval();
  }
  if (!out.sigma.allFinite()) {
    throw IntegrationFailure("covariance diverged during propagation");
  }
  return out;
}

double measure_q_star(const CovarianceState& initial_thermal, Energy final_energy, Frequency final_frequency) {
  require_physical(initial_thermal);
  return final_energy.value() / (final_frequency.value() * symplectic_eigenvalue(initial_thermal));
}

double stroke_entropy_production(const CovarianceState& state_after_unitary, InverseTemperature target_beta,
                                 const QuadraticHamiltonian& target_ham) {
  return relative_entropy_to_thermal(state_after_unitary, target_ham, target_beta);
}

const char* to_string(StrokeKind kind) {
  switch (kind) {
    case StrokeKind::kCompression:
      return "compression";
    case StrokeKind::kCooling:
      return "cooling";
    case StrokeKind::kExpansion:
      return "expansion";
    case StrokeKind::kHeating:
      return "heating";
  }
  return "unknown";
}

double CycleReport::first_law_residual() const {
  double sum = 0.0;
  for (const StrokeRecord& s : strokes) {
    sum += s.work.value() + s.heat.value();
  }
  return sum;
}

double CycleReport::sigma_total() const {
  return compression().entropy_production.value_or(0.0) + expansion().entropy_production.value_or(0.0);
}

CycleReport run_finite_time_cycle(const EngineParams& params, StrokeDuration tau, const IntegratorConfig& config) {
  validate(params);
  const QuadraticHamiltonian bare = QuadraticHamiltonian::bare(params.omega);
  const QuadraticHamiltonian pumped = QuadraticHamiltonian::pumped(params);
  const double chi = pumped.chi();

  CycleReport report;
  report.eta_carnot = eta_carnot(params);
  report.eta_qs = eta_quasistatic(params);

  // (i) compression from the hot Gibbs state of the free oscillator.
  const CovarianceState rho1 = thermal_state(bare, params.beta_h);
  const Energy e1 = mean_energy(rho1, bare);
  const CovarianceState rho2 =
      propagate(rho1, {RampDirection::kCompression, chi, tau, RampProfile::kLinear}, params.omega, config);
  const Energy e2 = mean_energy(rho2, pumped);
  StrokeRecord& comp = report.strokes[0];
  comp.kind = StrokeKind::kCompression;
  comp.duration = tau;
  comp.energy_before = e1;
  comp.energy_after = e2;
  comp.work = Work((e2 - e1).value());
  comp.entropy_after = von_neumann_entropy(rho2);
  comp.q_star = measure_q_star(rho1, e2, pumped.normal_frequency());
  comp.entropy_production = stroke_entropy_production(rho2, params.beta_c, pumped);

  // (ii) cooling: relax to the cold Gibbs state of the pumped oscillator.
  const CovarianceState rho3 = thermal_state(pumped, params.beta_c);
  const Energy e3 = mean_energy(rho3, pumped);
  StrokeRecord& cool = report.strokes[1];
  cool.kind = StrokeKind::kCooling;
  cool.energy_before = e2;
  cool.energy_after = e3;
  cool.heat = Heat((e3 - e2).value());
  cool.entropy_after = von_neumann_entropy(rho3);

  // (iii) expansion back to the free oscillator.
  const CovarianceState rho4 =
      propagate(rho3, {RampDirection::kExpansion, chi, tau, RampProfile::kLinear}, params.omega, config);
  const Energy e4 = mean_energy(rho4, bare);
  StrokeRecord& exp = report.strokes[2];
  exp.kind = StrokeKind::kExpansion;
  exp.duration = tau;
  exp.energy_before = e3;
  exp.energy_after = e4;
  exp.work = Work((e4 - e3).value());
  exp.entropy_after = von_neumann_entropy(rho4);
  exp.q_star = measure_q_star(rho3, e4, bare.normal_frequency());
  exp.entropy_production = stroke_entropy_production(rho4, params.beta_h, bare);

  // (iv) heating closes the cycle at rho1.
  StrokeRecord& heat = report.strokes[3];
  heat.kind = StrokeKind::kHeating;
  heat.energy_before = e4;
  heat.energy_after = e1;
  heat.heat = Heat((e1 - e4).value());
  heat.entropy_after = von_neumann_entropy(rho1);

  report.w_net = comp.work + exp.work;
  report.q_abs = heat.heat;
  if (report.w_net.value() < 0.0 && report.q_abs.value() > 0.0) {
    report.efficiency = -report.w_net.value() / report.q_abs.value();
  }
  return report;
}

}  // namespace otto
