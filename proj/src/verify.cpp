#include "otto/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "otto/parallel.hpp"

namespace otto {

namespace {

constexpr double kAnalyticFirstLawTolerance = 1e-10;
constexpr double kSimulatedTolerance = 1e-8;
constexpr double kEqualityTolerance = 1e-10;
constexpr double kOracleTolerance = 1e-6;

EngineParams random_params(std::mt19937_64& rng, double r_hi) {
  std::uniform_real_distribution<double> omega(1.0, 20.0);
  std::uniform_real_distribution<double> r(0.0, r_hi);
  std::uniform_real_distribution<double> beta(0.01, 5.0);
  EngineParams p;
  p.omega = Frequency(omega(rng));
  p.r = r(rng);
  double b1 = beta(rng);
  double b2 = beta(rng);
  while (b1 == b2) {
    b2 = beta(rng);
  }
  p.beta_h = InverseTemperature(std::min(b1, b2));
  p.beta_c = InverseTemperature(std::max(b1, b2));
  return p;
}

CheckResult check_carnot(const VerifyOptions& o, std::mt19937_64& rng) {
  CheckResult res{"carnot bound", true, {}};
  std::size_t engines = 0;
  std::size_t failures = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < o.theorem_samples; ++i) {
    const AnalyticCycleInput in = random_cycle_input(rng);
    const CarnotWitness w = verify_carnot_bound(in);
    if (!w.engine) continue;
    ++engines;
    worst = std::max(worst, w.eta - w.eta_carnot);
    if (!w.holds()) ++failures;
  }
  res.passed = failures == 0 && engines > 0;
  std::ostringstream s;
  s << o.theorem_samples << " samples, " << engines << " engines, " << failures
    << " violations, max(eta - eta_C) = " << worst;
  res.detail = s.str();
  return res;
}

// eta reaches eta_C at Q* = 1, r = r_max and stays strictly below it
// elsewhere on the sampled engine points.
CheckResult check_carnot_equality(const VerifyOptions& o, std::mt19937_64& rng) {
  CheckResult res{"carnot equality locus", true, {}};
  const std::size_t n = std::max<std::size_t>(1, o.theorem_samples / 100);
  double worst_gap = 0.0;
  std::size_t touching = 0;
  for (std::size_t i = 0; i < n; ++i) {
    EngineParams p = random_params(rng, 2.0);
    p.r = r_max(p);
    const AnalyticCycleOutput out = stroke_energetics({p, 1.0});
    worst_gap = std::max(worst_gap, std::abs(out.efficiency_formula - out.eta_carnot));

    const AnalyticCycleInput in = random_cycle_input(rng);
    const CarnotWitness w = verify_carnot_bound(in);
    const bool near_locus = std::abs(in.q_star - 1.0) < 1e-6 && std::abs(in.params.r - r_max(in.params)) < 1e-6;
    if (w.engine && !near_locus && w.eta >= w.eta_carnot) ++touching;
  }
  res.passed = worst_gap <= kEqualityTolerance && touching == 0;
  std::ostringstream s;
  s << n << " points on the locus, max |eta - eta_C| = " << worst_gap << "; " << touching
    << " off-locus engines reaching eta_C";
  res.detail = s.str();
  return res;
}

CheckResult check_analytic_first_law(const VerifyOptions& o, std::mt19937_64& rng) {
  CheckResult res{"first law (analytic)", true, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < o.theorem_samples; ++i) {
    AnalyticCycleOutput out = stroke_energetics(random_cycle_input(rng));
    if (o.fault == Fault::kFlipCompressionWork) {
      out.w_comp = -out.w_comp;
    }
    const double sum = out.w_exp.value() + out.w_comp.value() + out.q_h.value() + out.q_c.value();
    const double scale = std::max({1.0, std::abs(out.w_exp.value()), std::abs(out.w_comp.value()),
                                   std::abs(out.q_h.value()), std::abs(out.q_c.value())});
    worst = std::max(worst, std::abs(sum) / scale);
  }
  res.passed = worst <= kAnalyticFirstLawTolerance;
  std::ostringstream s;
  s << "max |W_exp + W_comp + Q_h + Q_c| / scale = " << worst;
  res.detail = s.str();
  return res;
}

// Simulated cycles: the stroke works must close the energy balance and agree
// with the closed form evaluated at the measured Husimi parameter.
CheckResult check_simulated_first_law(const VerifyOptions& o, std::mt19937_64& rng) {
  CheckResult res{"first law (simulated)", true, {}};
  std::uniform_real_distribution<double> tau_dist(0.05, 5.0);
  struct Sample {
    EngineParams params;
    double tau;
    double residual = 0.0;
    double closed_form = 0.0;
    std::string error;
  };
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < o.cycle_samples; ++i) {
    EngineParams p = random_params(rng, 1.2);
    p.omega = Frequency(2.0 * kPi);
    samples.push_back({p, tau_dist(rng), 0.0, 0.0, {}});
  }
  parallel_for(samples.size(), o.jobs, [&](std::size_t i) {
    Sample& s = samples[i];
    try {
      const CycleReport rep = run_finite_time_cycle(s.params, StrokeDuration::periods(s.tau), o.integrator);
      double w_comp = rep.compression().work.value();
      if (o.fault == Fault::kFlipCompressionWork) w_comp = -w_comp;
      const double sum = w_comp + rep.expansion().work.value() + rep.cooling().heat.value() +
                         rep.heating().heat.value();
      s.residual = std::abs(sum);
      const AnalyticCycleOutput a = stroke_energetics({s.params, *rep.compression().q_star});
      s.closed_form = std::max({std::abs(a.w_comp.value() - w_comp),
                                std::abs(a.w_exp.value() - rep.expansion().work.value()),
                                std::abs(a.q_h.value() - rep.heating().heat.value()),
                                std::abs(a.q_c.value() - rep.cooling().heat.value())});
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  });
  double worst_residual = 0.0;
  double worst_closed = 0.0;
  for (const Sample& s : samples) {
    if (!s.error.empty()) {
      res.passed = false;
      res.detail = "cycle failed: " + s.error;
      return res;
    }
    worst_residual = std::max(worst_residual, s.residual);
    worst_closed = std::max(worst_closed, s.closed_form);
  }
  res.passed = worst_residual <= kSimulatedTolerance && worst_closed <= kSimulatedTolerance;
  std::ostringstream s;
  s << samples.size() << " cycles, max residual = " << worst_residual
    << ", max deviation from closed form at measured Q* = " << worst_closed;
  res.detail = s.str();
  return res;
}

CheckResult check_gaussian_integrity(const VerifyOptions& o, std::mt19937_64& rng) {
  CheckResult res{"gaussian integrity", true, {}};
  std::uniform_real_distribution<double> r_dist(0.0, 1.2);
  std::uniform_real_distribution<double> tau_dist(0.05, 3.0);
  std::uniform_real_distribution<double> beta_dist(0.01, 5.0);
  std::bernoulli_distribution direction(0.5);
  double worst_drift = 0.0;
  double min_nu = std::numeric_limits<double>::infinity();
  double min_d = std::numeric_limits<double>::infinity();
  const Frequency omega(2.0 * kPi);
  for (std::size_t i = 0; i < o.state_samples; ++i) {
    const CovarianceState state = random_squeezed_thermal(rng);
    const double chi = 0.5 * omega.value() * std::tanh(2.0 * r_dist(rng));
    const RampSchedule schedule{direction(rng) ? RampDirection::kCompression : RampDirection::kExpansion, chi,
                                StrokeDuration::periods(tau_dist(rng)), RampProfile::kLinear};
    const CovarianceState out = propagate(state, schedule, omega, o.integrator);
    const double d0 = state.sigma.determinant();
    worst_drift = std::max(worst_drift, std::abs(out.sigma.determinant() - d0) / d0);
    min_nu = std::min({min_nu, symplectic_eigenvalue(state), symplectic_eigenvalue(out)});
    const QuadraticHamiltonian target(omega, 0.5 * omega.value() * std::tanh(2.0 * r_dist(rng)));
    min_d = std::min(min_d, relative_entropy_to_thermal(out, target, InverseTemperature(beta_dist(rng))));
  }
  res.passed = worst_drift < kSimulatedTolerance && min_nu >= 0.5 - kHeisenbergTolerance && min_d >= 0.0;
  std::ostringstream s;
  s << o.state_samples << " states, max relative det drift = " << worst_drift << ", min nu = " << min_nu
    << ", min D = " << min_d;
  res.detail = s.str();
  return res;
}

CheckResult check_oracle(const VerifyOptions& o) {
  CheckResult res{"fock oracle", true, {}};
  struct Point {
    double r;
    double tau;
    double deviation = 0.0;
    std::size_t dim = 0;
    std::string error;
  };
  std::vector<Point> points;
  for (double r : o.oracle_r) {
    for (double tau : o.oracle_tau) {
      points.push_back({r, tau, 0.0, 0, {}});
    }
  }
  parallel_for(points.size(), o.jobs, [&](std::size_t i) {
    Point& pt = points[i];
    try {
      EngineParams p;
      p.r = pt.r;
      const StrokeDuration tau = StrokeDuration::periods(pt.tau);
      const CycleReport gauss = run_finite_time_cycle(p, tau, o.integrator);
      const fock::CycleResult fock_result = fock::run_cycle(p, tau, o.fock);
      pt.deviation = max_report_deviation(gauss, fock_result.report);
      pt.dim = fock_result.dim;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });
  double worst = 0.0;
  std::size_t max_dim = 0;
  for (const Point& pt : points) {
    if (!pt.error.empty()) {
      res.passed = false;
      res.detail = "oracle cycle failed: " + pt.error;
      return res;
    }
    worst = std::max(worst, pt.deviation);
    max_dim = std::max(max_dim, pt.dim);
  }
  res.passed = worst <= kOracleTolerance;
  std::ostringstream s;
  s << points.size() << " cycles, max deviation = " << worst << ", largest cutoff = " << max_dim;
  res.detail = s.str();
  return res;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CovarianceState random_squeezed_thermal(std::mt19937_64& rng, double max_nu, double max_squeeze) {
  std::uniform_real_distribution<double> nu_dist(0.5, max_nu);
  std::uniform_real_distribution<double> s_dist(0.0, max_squeeze);
  std::uniform_real_distribution<double> phi_dist(0.0, kPi);
  const double nu = nu_dist(rng);
  const double s = s_dist(rng);
  const double phi = phi_dist(rng);
  Eigen::Matrix2d rot;
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  const Eigen::Vector2d diag(std::exp(-2.0 * s), std::exp(2.0 * s));
  CovarianceState state;
  state.sigma = nu * rot * diag.asDiagonal() * rot.transpose();
  state.sigma = 0.5 * (state.sigma + state.sigma.transpose()).eval();
  return state;
}

AnalyticCycleInput random_cycle_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  AnalyticCycleInput in;
  in.params = random_params(rng, 2.0);
  const double x = u(rng);
  in.q_star = 1.0 + 4.0 * x * x * x * x;
  return in;
}

double max_report_deviation(const CycleReport& a, const CycleReport& b) {
  double worst = 0.0;
  auto take = [&](double x, double y) { worst = std::max(worst, std::abs(x - y)); };
  for (std::size_t i = 0; i < a.strokes.size(); ++i) {
    const StrokeRecord& sa = a.strokes[i];
    const StrokeRecord& sb = b.strokes[i];
    take(sa.energy_before.value(), sb.energy_before.value());
    take(sa.energy_after.value(), sb.energy_after.value());
    take(sa.entropy_after, sb.entropy_after);
    if (sa.entropy_production.has_value() != sb.entropy_production.has_value()) {
      return std::numeric_limits<double>::infinity();
    }
    if (sa.entropy_production) take(*sa.entropy_production, *sb.entropy_production);
  }
  if (a.efficiency.has_value() != b.efficiency.has_value()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.efficiency) take(*a.efficiency, *b.efficiency);
  return worst;
}

VerifyReport run_verification(const VerifyOptions& options) {
  if (options.theorem_samples == 0 || options.state_samples == 0) {
    throw InvalidParameter("sample counts must be positive");
  }
  std::mt19937_64 rng(options.seed);
  VerifyReport report;
  report.checks.push_back(check_carnot(options, rng));
  report.checks.push_back(check_carnot_equality(options, rng));
  report.checks.push_back(check_analytic_first_law(options, rng));
  report.checks.push_back(check_simulated_first_law(options, rng));
  report.checks.push_back(check_gaussian_integrity(options, rng));
  if (options.oracle) {
    report.checks.push_back(check_oracle(options));
  }
  return report;
}

}  // namespace otto
