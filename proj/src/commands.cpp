#include "otto/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "otto/analytic_cycle.hpp"
#include "otto/fock_oracle.hpp"
#include "otto/parallel.hpp"

#ifndef OTTO_VERSION
#define OTTO_VERSION "unknown"
#endif

namespace otto::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* method_name(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::kMagnus4:
      return "magnus4";
    case IntegrationMethod::kRungeKutta4:
      return "rk4";
    case IntegrationMethod::kAdaptive:
      return "adaptive";
  }
  return "unknown";
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

void validate_grid(const Grid& g, const char* name) {
  require(std::isfinite(g.min) && std::isfinite(g.max), std::string(name) + " bounds must be finite");
  require(g.steps >= 1, std::string(name) + " grid needs at least one point");
  require(g.min <= g.max, std::string(name) + " grid bounds must be ordered");
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_number(xs[i]);
  }
  return s;
}

double eta_or_nan(const Efficiency& e) { return e ? *e : kNaN; }

// Quasi-static efficiency where the Q* = 1 cycle still runs as an engine or
// is idle (r = 0), NaN beyond r_max.
double clipped_eta_qs(const EngineParams& p) { return p.r <= r_max(p) ? eta_quasistatic(p) : kNaN; }

void write_row(std::ostream& out, std::initializer_list<double> cells) {
  bool first = true;
  for (double c : cells) {
    if (!first) out << ',';
    out << format_number(c);
    first = false;
  }
  out << '\n';
}

void write_report(std::ostream& out, const CycleReport& rep) {
  out << "stroke,work,heat,energy_before,energy_after,entropy_after,q_star,entropy_production\n";
  for (const StrokeRecord& s : rep.strokes) {
    out << to_string(s.kind);
    for (double c : {s.work.value(), s.heat.value(), s.energy_before.value(), s.energy_after.value(), s.entropy_after,
                     s.q_star.value_or(kNaN), s.entropy_production.value_or(kNaN)}) {
      out << ',' << format_number(c);
    }
    out << '\n';
  }
  out << "w_net = " << format_number(rep.w_net.value()) << '\n';
  out << "q_abs = " << format_number(rep.q_abs.value()) << '\n';
  out << "eta = " << (rep.efficiency ? format_number(*rep.efficiency) : std::string("not an engine")) << '\n';
  out << "eta_qs = " << format_number(rep.eta_qs) << '\n';
  out << "eta_carnot = " << format_number(rep.eta_carnot) << '\n';
  out << "sigma_total = " << format_number(rep.sigma_total()) << '\n';
  out << "first_law_residual = " << format_number(rep.first_law_residual()) << '\n';
}

}  // namespace

const char* to_string(Command command) {
  switch (command) {
    case Command::kFig1:
      return "fig1";
    case Command::kFig2:
      return "fig2";
    case Command::kFig3:
      return "fig3";
    case Command::kCycle:
      return "cycle";
    case Command::kVerify:
      return "verify";
  }
  return "unknown";
}

std::vector<double> Grid::values() const {
  std::vector<double> v(steps);
  if (steps == 1) {
    v[0] = min;
    return v;
  }
  const double span = max - min;
  const double n = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    v[i] = min + span * (static_cast<double>(i) / n);
  }
  v.back() = max;
  return v;
}

SweepSpec default_spec(Command command) {
  SweepSpec spec;
  spec.command = command;
  switch (command) {
    case Command::kFig1:
    case Command::kFig2:
    case Command::kFig3:
      break;
    case Command::kCycle:
      spec.r_values = {0.4};
      break;
    case Command::kVerify:
      spec.oracle = true;
      break;
  }
  if (command == Command::kFig3) {
    spec.r_grid = {0.0, 2.0, 201};
  }
  return spec;
}

void validate(const SweepSpec& spec) {
  validate(spec.params);
  validate_grid(spec.r_grid, "r");
  validate_grid(spec.tau_grid, "tau");
  require(spec.r_grid.min >= 0.0, "r must be non-negative");
  require(spec.tau_grid.min >= 0.0, "tau must be non-negative");
  require(!spec.r_values.empty(), "r list is empty");
  for (double r : spec.r_values) {
    require(std::isfinite(r) && r >= 0.0, "r must be finite and non-negative");
  }
  require(std::isfinite(spec.qstar_max) && spec.qstar_max >= 1.0, "qstar-max must be at least 1");
  require(spec.qstar_steps >= 1, "qstar grid needs at least one point");
  require(std::isfinite(spec.integrator.step) && spec.integrator.step > 0.0, "step must be positive");
  require(spec.jobs >= 1, "jobs must be at least 1");
  require(spec.samples >= 1, "samples must be positive");
}

std::string metadata_line(const SweepSpec& spec) {
  std::ostringstream s;
  s << "# otto " << OTTO_VERSION << " command=" << to_string(spec.command)
    << " omega=" << format_number(spec.params.omega.value()) << " beta_h=" << format_number(spec.params.beta_h.value())
    << " beta_c=" << format_number(spec.params.beta_c.value());
  switch (spec.command) {
    case Command::kFig1:
      s << " r_min=" << format_number(spec.r_grid.min) << " r_max=" << format_number(spec.r_grid.max)
        << " r_steps=" << spec.r_grid.steps;
      break;
    case Command::kFig2:
      s << " r=" << join(spec.r_values) << " tau_min=" << format_number(spec.tau_grid.min)
        << " tau_max=" << format_number(spec.tau_grid.max) << " tau_steps=" << spec.tau_grid.steps;
      break;
    case Command::kFig3:
      s << " r_min=" << format_number(spec.r_grid.min) << " r_max=" << format_number(spec.r_grid.max)
        << " r_steps=" << spec.r_grid.steps << " qstar_max=" << format_number(spec.qstar_max)
        << " qstar_steps=" << spec.qstar_steps;
      break;
    case Command::kCycle:
      s << " r=" << format_number(spec.r_values.front())
        << " tau=" << (spec.tau.is_sudden() ? std::string("sudden") : format_number(spec.tau.periods()));
      break;
    case Command::kVerify:
      s << " samples=" << spec.samples;
      break;
  }
  s << " step=" << format_number(spec.integrator.step) << " method=" << method_name(spec.integrator.method)
    << " oracle=" << (spec.oracle ? 1 : 0) << " seed=" << spec.seed;
  if (spec.fault != Fault::kNone) s << " fault=flip-w-comp";
  return s.str();
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

int cmd_fig1(const SweepSpec& spec, std::ostream& out) {
  out << metadata_line(spec) << '\n' << "r,eta_qs,eta_carnot,engine_flag\n";
  EngineParams p = spec.params;
  for (double r : spec.r_grid.values()) {
    p.r = r;
    write_row(out, {r, clipped_eta_qs(p), eta_carnot(p), quasistatic_engine(p) ? 1.0 : 0.0});
  }
  return kSuccess;
}

int cmd_fig2(const SweepSpec& spec, std::ostream& out) {
  const std::vector<double> taus = spec.tau_grid.values();
  struct Row {
    double r;
    double tau;
    std::optional<CycleReport> report;
  };
  std::vector<Row> rows;
  for (double r : spec.r_values) {
    for (double tau : taus) {
      rows.push_back({r, tau, std::nullopt});
    }
  }
  parallel_for(rows.size(), spec.jobs, [&](std::size_t i) {
    Row& row = rows[i];
    EngineParams p = spec.params;
    p.r = row.r;
    try {
      const StrokeDuration tau = row.tau == 0.0 ? StrokeDuration::sudden() : StrokeDuration::periods(row.tau);
      if (spec.oracle) {
        row.report = fock::run_cycle(p, tau, fock::CycleConfig{}).report;
      } else {
        row.report = run_finite_time_cycle(p, tau, spec.integrator);
      }
    } catch (const OttoError&) {
      row.report.reset();
    }
  });

  out << metadata_line(spec) << '\n' << "r,tau_periods,eta,sigma_total,q_star_comp,q_star_exp,eta_qs_reference\n";
  for (const Row& row : rows) {
    EngineParams p = spec.params;
    p.r = row.r;
    if (row.report) {
      const CycleReport& rep = *row.report;
      write_row(out, {row.r, row.tau, eta_or_nan(rep.efficiency), rep.sigma_total(), *rep.compression().q_star,
                      *rep.expansion().q_star, clipped_eta_qs(p)});
    } else {
      write_row(out, {row.r, row.tau, kNaN, kNaN, kNaN, kNaN, clipped_eta_qs(p)});
    }
  }
  return kSuccess;
}

int cmd_fig3(const SweepSpec& spec, std::ostream& out) {
  const Grid q_grid{1.0, spec.qstar_max, spec.qstar_steps};
  const std::vector<double> rs = spec.r_grid.values();
  const std::vector<double> qs = q_grid.values();
  const std::vector<EtaMapCell> cells = sweep_eta_map(spec.params, rs, qs);
  out << metadata_line(spec) << '\n' << "r,q_star,eta,engine_flag\n";
  for (const EtaMapCell& c : cells) {
    write_row(out, {c.r, c.q_star, eta_or_nan(c.eta), c.eta ? 1.0 : 0.0});
  }
  return kSuccess;
}

int cmd_cycle(const SweepSpec& spec, std::ostream& out) {
  EngineParams p = spec.params;
  p.r = spec.r_values.front();
  const CycleReport rep = run_finite_time_cycle(p, spec.tau, spec.integrator);
  out << metadata_line(spec) << '\n';
  out << describe(p) << '\n';
  write_report(out, rep);
  if (spec.oracle) {
    const fock::CycleResult fock_result = fock::run_cycle(p, spec.tau, fock::CycleConfig{});
    out << "fock oracle (cutoff " << fock_result.dim << ")\n";
    write_report(out, fock_result.report);
    out << "max deviation = " << format_number(max_report_deviation(rep, fock_result.report)) << '\n';
  }
  return kSuccess;
}

int cmd_verify(const SweepSpec& spec, std::ostream& out) {
  VerifyOptions options;
  options.seed = spec.seed;
  options.theorem_samples = spec.samples;
  options.state_samples = std::max<std::size_t>(1, spec.samples / 100);
  options.oracle = spec.oracle;
  options.integrator = spec.integrator;
  options.fault = spec.fault;
  options.jobs = spec.jobs;
  const VerifyReport report = run_verification(options);
  out << metadata_line(spec) << '\n';
  for (const CheckResult& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  out << (report.passed() ? "all checks passed" : "verification FAILED") << '\n';
  return report.passed() ? kSuccess : kVerificationFailure;
}

int run(const SweepSpec& spec, std::ostream& stdout_stream, std::ostream& err) {
  try {
    validate(spec);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  }
  std::ofstream file;
  std::ostream* out = &stdout_stream;
  if (!spec.out.empty() && spec.out != "-") {
    file.open(spec.out, std::ios::out | std::ios::trunc);
    if (!file) {
      err << "error: cannot open " << spec.out << " for writing\n";
      return kBadArguments;
    }
    out = &file;
  }
  int code = kSuccess;
  try {
    switch (spec.command) {
      case Command::kFig1:
        code = cmd_fig1(spec, *out);
        break;
      case Command::kFig2:
        code = cmd_fig2(spec, *out);
        break;
      case Command::kFig3:
        code = cmd_fig3(spec, *out);
        break;
      case Command::kCycle:
        code = cmd_cycle(spec, *out);
        break;
      case Command::kVerify:
        code = cmd_verify(spec, *out);
        break;
    }
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const UnstablePump& e) {
    err << "error: " << e.what() << '\n';
    return kBadArguments;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  out->flush();
  if (!*out) {
    err << "error: write failed\n";
    return kBadArguments;
  }
  return code;
}

}  // namespace otto::cli
