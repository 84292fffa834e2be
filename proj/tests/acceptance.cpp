// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/LU>

#include "limits.hpp"
#include "otto/analytic_cycle.hpp"
#include "otto/commands.hpp"
#include "otto/bogoliubov.hpp"
#include "otto/dynamics.hpp"
#include "otto/fock_oracle.hpp"
#include "otto/parallel.hpp"
#include "otto/verify.hpp"

using namespace otto;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

EngineParams with_r(double r) {
  EngineParams p;
  p.r = r;
  return p;
}

std::string num(double x) { return cli::format_number(x); }

Outcome quasistatic_curve() {
  const EngineParams base;
  const double rm = r_max(base);
  double worst_curve = 0.0;
  bool flags_ok = true;
  for (double r : cli::Grid{0.0, 3.0, 3001}.values()) {
    const EngineParams p = with_r(r);
    const double e2r = std::exp(2.0 * r);
    worst_curve = std::max(worst_curve, std::abs(eta_quasistatic(p) - (1.0 - 2.0 / (e2r + 1.0 / e2r))));
    const bool engine = stroke_energetics({p, 1.0}).efficiency.has_value();
    if (r > rm && engine) flags_ok = false;
    if (r > 0.0 && r < rm - 1e-9 && !engine) flags_ok = false;
  }
  const double rm_ref = 0.5 * std::log(10.0 + std::sqrt(99.0));
  const double eta_at_max = eta_quasistatic(with_r(rm));
  const bool ok = worst_curve <= 1e-12 && std::abs(rm - rm_ref) <= 1e-10 && std::abs(eta_at_max - 0.9) <= 1e-10 &&
                  flags_ok;
  return {ok, "r_max = " + num(rm) + ", eta_qs(r_max) = " + num(eta_at_max) + ", curve error " + num(worst_curve) +
                  (flags_ok ? ", engine flag drops beyond r_max" : ", engine flag WRONG")};
}

Outcome carnot_theorem() {
  std::mt19937_64 rng(20240611);
  std::size_t engines = 0;
  std::size_t violations = 0;
  double worst = -1.0;
  for (int i = 0; i < 100000; ++i) {
    const AnalyticCycleInput in = random_cycle_input(rng);
    const CarnotWitness w = verify_carnot_bound(in);
    if (!w.engine) continue;
    ++engines;
    worst = std::max(worst, w.eta - w.eta_carnot);
    if (!w.holds() || w.eta > w.eta_carnot + 1e-12) ++violations;
  }
  double equality_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    AnalyticCycleInput in = random_cycle_input(rng);
    in.params.r = r_max(in.params);
    in.q_star = 1.0;
    const AnalyticCycleOutput out = stroke_energetics(in);
    equality_gap = std::max(equality_gap, std::abs(out.efficiency_formula - out.eta_carnot));
  }
  const bool ok = violations == 0 && engines > 0 && equality_gap <= 1e-10;
  return {ok, std::to_string(engines) + " engine points, " + std::to_string(violations) +
                  " violations, max(eta - eta_C) = " + num(worst) + ", |eta - eta_C| at (Q*=1, r_max) <= " +
                  num(equality_gap)};
}

Outcome first_law() {
  std::mt19937_64 rng(7);
  double analytic = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const AnalyticCycleOutput o = stroke_energetics(random_cycle_input(rng));
    analytic = std::max(analytic, std::abs(o.w_exp.value() + o.w_comp.value() + o.q_h.value() + o.q_c.value()));
  }
  std::uniform_real_distribution<double> r_dist(0.0, 1.2);
  std::uniform_real_distribution<double> tau_dist(0.05, 10.0);
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 64; ++i) {
    const double r = r_dist(rng);
    samples.emplace_back(r, tau_dist(rng));
  }
  std::vector<double> residual(samples.size());
  std::vector<double> closed_form(samples.size());
  parallel_for(samples.size(), jobs(), [&](std::size_t i) {
    const EngineParams p = with_r(samples[i].first);
    const CycleReport rep = run_finite_time_cycle(p, StrokeDuration::periods(samples[i].second), IntegratorConfig{});
    residual[i] = std::abs(rep.first_law_residual());
    const AnalyticCycleOutput a = stroke_energetics({p, *rep.compression().q_star});
    closed_form[i] = std::max({std::abs(a.w_comp.value() - rep.compression().work.value()),
                               std::abs(a.w_exp.value() - rep.expansion().work.value()),
                               std::abs(a.q_h.value() - rep.heating().heat.value()),
                               std::abs(a.q_c.value() - rep.cooling().heat.value())});
  });
  const double sim = *std::max_element(residual.begin(), residual.end());
  const double cf = *std::max_element(closed_form.begin(), closed_form.end());
  const bool ok = analytic <= 1e-10 && sim <= 1e-8 && cf <= 1e-8;
  return {ok, "analytic residual " + num(analytic) + " (1e5 cycles), simulated residual " + num(sim) +
                  ", simulated vs closed form at measured Q* " + num(cf) + " (64 cycles)"};
}

Outcome quench_limits() {
  const EngineParams p = with_r(0.4);
  const double expected = q_star_sudden(p.omega, p.pumped_frequency());
  const CycleReport sudden = run_finite_time_cycle(p, StrokeDuration::sudden(), IntegratorConfig{});
  const CycleReport short_ramp = run_finite_time_cycle(p, StrokeDuration::periods(1e-6), IntegratorConfig{});
  const double measured = *sudden.compression().q_star;
  const double measured_short = *short_ramp.compression().q_star;
  double adiabatic = 0.0;
  for (double tau : {200.0, 300.0, 500.0}) {
    const CycleReport slow = run_finite_time_cycle(p, StrokeDuration::periods(tau), IntegratorConfig{});
    adiabatic = std::max({adiabatic, std::abs(*slow.compression().q_star - 1.0),
                          std::abs(*slow.expansion().q_star - 1.0)});
  }
  const bool sudden_ok = std::abs(measured - expected) <= 1e-10 && std::abs(measured_short - expected) <= 1e-10;
  const bool adiabatic_ok = adiabatic <= 1e-3;
  std::ostringstream s;
  s << "sudden Q* measured " << num(measured) << " (tau = 1e-6 periods: " << num(measured_short)
    << ") vs expected (w^2+W^2)/(2wW) = " << num(expected) << (sudden_ok ? " ok" : " MISMATCH")
    << "; measured equals cosh(2r) = " << num(std::cosh(0.8)) << " to "
    << num(std::abs(measured - std::cosh(0.8))) << "; adiabatic |Q* - 1| <= " << num(adiabatic)
    << " for tau >= 200 periods" << (adiabatic_ok ? " ok" : " FAIL");
  return {sudden_ok && adiabatic_ok, s.str()};
}

Outcome closed_form_limits() {
  EngineParams high;
  high.beta_h = InverseTemperature(1e-4);
  high.beta_c = InverseTemperature(1e-3);
  const limits::MaxWork ca = limits::maximize_over_r(high, r_max(high), [](const EngineParams&) { return 1.0; });
  const double ca_ref = 1.0 - std::sqrt(0.1);
  const limits::MaxWork hi = limits::maximize_over_r(
      high, 1.5, [](const EngineParams& q) { return q_star_sudden(q.omega, q.pumped_frequency()); });
  const double hi_ref = eta_sudden_high_temperature(high);
  const double big = 2.0 * kPi / std::cosh(0.8);
  const limits::MaxWork lo = limits::maximize_sudden_over_omega(big, 1e-3, 100.0);
  EngineParams low;
  low.omega = Frequency(lo.argument);
  low.r = 0.5 * std::acosh(lo.argument / big);
  low.beta_h = InverseTemperature(1e-3);
  low.beta_c = InverseTemperature(100.0);
  const double lo_ref = eta_sudden_low_temperature(low);
  const bool ok = std::abs(ca.efficiency - ca_ref) <= 1e-3 && std::abs(hi.efficiency / hi_ref - 1.0) <= 1e-3 &&
                  std::abs(lo.efficiency / lo_ref - 1.0) <= 1e-3;
  return {ok, "max-work eta " + num(ca.efficiency) + " vs 1 - sqrt(0.1) = " + num(ca_ref) + "; sudden high-T " +
                  num(hi.efficiency) + " vs " + num(hi_ref) + "; sudden low-T " + num(lo.efficiency) + " vs " +
                  num(lo_ref)};
}

struct Extremum {
  std::size_t index;
  bool maximum;
};

std::vector<Extremum> extrema(const std::vector<double>& y, const std::vector<bool>& valid) {
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(valid[i - 1] && valid[i] && valid[i + 1])) continue;
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.push_back({i, true});
    if (y[i] < y[i - 1] && y[i] < y[i + 1]) out.push_back({i, false});
  }
  return out;
}

Outcome figure_two() {
  const cli::SweepSpec spec = cli::default_spec(cli::Command::kFig2);
  const std::vector<double> taus = spec.tau_grid.values();
  std::ostringstream s;
  bool ok = true;
  std::vector<double> amplitudes;
  for (double r : spec.r_values) {
    const auto rows = sweep_tau(with_r(r), taus, spec.integrator, jobs());
    std::vector<double> eta(rows.size());
    std::vector<double> sigma(rows.size());
    std::vector<bool> engine(rows.size());
    std::vector<bool> all(rows.size(), true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].report) return {false, "cycle failed at tau = " + num(taus[i]) + ": " + rows[i].error};
      engine[i] = rows[i].report->efficiency.has_value();
      eta[i] = rows[i].report->efficiency.value_or(NAN);
      sigma[i] = rows[i].report->sigma_total();
    }
    const auto eta_ext = extrema(eta, engine);
    const auto sigma_ext = extrema(sigma, all);
    std::size_t unpaired = 0;
    for (const Extremum& e : eta_ext) {
      const bool paired = std::any_of(sigma_ext.begin(), sigma_ext.end(), [&](const Extremum& x) {
        return x.maximum != e.maximum && (x.index + 1 >= e.index && x.index <= e.index + 1);
      });
      if (!paired) ++unpaired;
    }
    std::vector<double> late;
    for (const Extremum& e : eta_ext) {
      if (taus[e.index] >= 5.0) late.push_back(eta[e.index]);
    }
    double amp = 0.0;
    for (std::size_t i = 1; i < late.size(); ++i) amp += std::abs(late[i] - late[i - 1]);
    amp = late.size() > 1 ? amp / static_cast<double>(late.size() - 1) : 0.0;
    amplitudes.push_back(amp);
    double touch = INFINITY;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      if (engine[i]) touch = std::min(touch, std::abs(eta[i] - eta_quasistatic(with_r(r))));
    }
    const bool oscillates = eta_ext.size() >= 2;
    ok = ok && oscillates && unpaired == 0;
    if (r == 0.4) ok = ok && touch <= 1e-3;
    s << "r=" << r << ": " << eta_ext.size() << " eta extrema, " << unpaired << " unpaired, amplitude " << num(amp)
      << ", min |eta - eta_qs| " << num(touch) << "; ";
  }
  const bool growing = std::is_sorted(amplitudes.begin(), amplitudes.end()) &&
                       std::adjacent_find(amplitudes.begin(), amplitudes.end()) == amplitudes.end();
  ok = ok && growing;
  s << (growing ? "amplitude increases with r" : "amplitude NOT increasing with r");
  return {ok, s.str()};
}

Outcome oracle_equivalence() {
  const std::vector<double> rs{0.4, 0.8, 1.2};
  const std::vector<double> taus{0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0};
  std::vector<double> deviation(rs.size() * taus.size());
  std::vector<std::size_t> dims(deviation.size());
  std::vector<std::string> errors(deviation.size());
  parallel_for(deviation.size(), jobs(), [&](std::size_t i) {
    const EngineParams p = with_r(rs[i / taus.size()]);
    const StrokeDuration tau = StrokeDuration::periods(taus[i % taus.size()]);
    try {
      const fock::CycleResult f = fock::run_cycle(p, tau, fock::CycleConfig{});
      deviation[i] = max_report_deviation(run_finite_time_cycle(p, tau, IntegratorConfig{}), f.report);
      dims[i] = f.dim;
    } catch (const std::exception& e) {
      errors[i] = e.what();
      deviation[i] = INFINITY;
    }
  });
  for (const std::string& e : errors) {
    if (!e.empty()) return {false, "oracle failed: " + e};
  }
  const double worst = *std::max_element(deviation.begin(), deviation.end());
  const std::size_t top = *std::max_element(dims.begin(), dims.end());
  return {worst <= 1e-6, "30 cycles (r in {0.4, 0.8, 1.2}, 10 durations), max deviation " + num(worst) +
                             ", cutoff grown from 80 up to " + std::to_string(top)};
}

Outcome gaussian_integrity() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> r_dist(0.0, 1.2);
  std::uniform_real_distribution<double> tau_dist(0.05, 5.0);
  std::uniform_real_distribution<double> beta_dist(0.01, 5.0);
  const Frequency omega(2.0 * kPi);
  double drift = 0.0;
  double min_nu = INFINITY;
  double min_d = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const CovarianceState s = random_squeezed_thermal(rng);
    const RampSchedule schedule{i % 2 ? RampDirection::kExpansion : RampDirection::kCompression,
                                chi_from_r(omega, r_dist(rng)), StrokeDuration::periods(tau_dist(rng)),
                                RampProfile::kLinear};
    const CovarianceState out = propagate(s, schedule, omega, IntegratorConfig{});
    drift = std::max(drift, std::abs(out.sigma.determinant() - s.sigma.determinant()));
    min_nu = std::min({min_nu, symplectic_eigenvalue(s), symplectic_eigenvalue(out)});
    const QuadraticHamiltonian target(omega, chi_from_r(omega, r_dist(rng)));
    min_d = std::min(min_d, relative_entropy_to_thermal(out, target, InverseTemperature(beta_dist(rng))));
  }
  const bool ok = drift < 1e-8 && min_nu >= 0.5 - 1e-12 && min_d >= 0.0;
  return {ok, "1000 states: det drift " + num(drift) + ", min nu " + num(min_nu) + ", min D " + num(min_d)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"quasi-static efficiency curve", 1.0, quasistatic_curve},
      {"Carnot bound over 1e5 random cycles", 10.0, carnot_theorem},
      {"first law, analytic and simulated", 60.0, first_law},
      {"sudden and adiabatic limits of Q*", 30.0, quench_limits},
      {"closed-form efficiencies at maximum work", 10.0, closed_form_limits},
      {"finite-time efficiency shape", 300.0, figure_two},
      {"Gaussian vs Fock backends", 300.0, oracle_equivalence},
      {"Gaussian state integrity", 30.0, gaussian_integrity},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool passed = o.passed && in_time;
    if (!passed) ++failures;
    std::printf("%s  %s [%.2f s / %.0f s budget%s]: %s\n", passed ? "PASS" : "FAIL", c.name.c_str(), seconds,
                c.budget_seconds, in_time ? "" : ", OVER BUDGET", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
