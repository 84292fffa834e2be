#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otto/commands.hpp"

namespace {

using otto::cli::Command;
using otto::cli::SweepSpec;

struct Flags {
  double omega = 0.0;
  std::vector<double> r;
  double beta_h = 0.0;
  double beta_c = 0.0;
  std::string tau = "1";
  std::string method = "magnus4";
  std::string fault;
};

void add_common(CLI::App* app, SweepSpec& spec, Flags& f) {
  f.omega = spec.params.omega.value();
  f.beta_h = spec.params.beta_h.value();
  f.beta_c = spec.params.beta_c.value();
  app->add_option("--omega", f.omega, "bare frequency")->capture_default_str();
  app->add_option("--beta-h", f.beta_h, "hot inverse temperature")->capture_default_str();
  app->add_option("--beta-c", f.beta_c, "cold inverse temperature")->capture_default_str();
  app->add_option("--out", spec.out, "output path, '-' for stdout");
  app->add_option("--jobs", spec.jobs, "worker threads")->capture_default_str();
  app->add_option("--seed", spec.seed, "64-bit RNG seed")->capture_default_str();
  app->add_option("--step", spec.integrator.step, "integrator step in periods")->capture_default_str();
  app->add_option("--method", f.method, "magnus4, rk4 or adaptive")
      ->check(CLI::IsMember({"magnus4", "rk4", "adaptive"}))
      ->capture_default_str();
  app->add_flag("--oracle,!--no-oracle", spec.oracle, "use or cross-check the Fock backend");
}

void add_r_grid(CLI::App* app, SweepSpec& spec) {
  app->add_option("--r-min", spec.r_grid.min)->capture_default_str();
  app->add_option("--r-max", spec.r_grid.max)->capture_default_str();
  app->add_option("--r-steps", spec.r_grid.steps)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametrically pumped oscillator heat engine"};
  app.set_version_flag("--version", std::string(OTTO_VERSION));
  app.require_subcommand(1);

  std::map<CLI::App*, Command> commands;
  std::map<Command, SweepSpec> specs;
  std::map<Command, Flags> flags;
  for (Command c : {Command::kFig1, Command::kFig2, Command::kFig3, Command::kCycle, Command::kVerify}) {
    specs[c] = otto::cli::default_spec(c);
    flags[c] = Flags{};
  }

  auto make = [&](Command c, const char* help) {
    CLI::App* sub = app.add_subcommand(otto::cli::to_string(c), help);
    commands[sub] = c;
    add_common(sub, specs[c], flags[c]);
    return sub;
  };

  CLI::App* fig1 = make(Command::kFig1, "quasi-static efficiency versus r (CSV)");
  add_r_grid(fig1, specs[Command::kFig1]);

  CLI::App* fig2 = make(Command::kFig2, "finite-time efficiency and entropy production versus tau (CSV)");
  fig2->add_option("--r", flags[Command::kFig2].r, "squeezing values")->delimiter(',');
  fig2->add_option("--tau-min", specs[Command::kFig2].tau_grid.min, "periods; 0 is a sudden stroke")
      ->capture_default_str();
  fig2->add_option("--tau-max", specs[Command::kFig2].tau_grid.max)->capture_default_str();
  fig2->add_option("--tau-steps", specs[Command::kFig2].tau_grid.steps)->capture_default_str();

  CLI::App* fig3 = make(Command::kFig3, "analytic efficiency over (r, Q*) (CSV)");
  add_r_grid(fig3, specs[Command::kFig3]);
  fig3->add_option("--qstar-max", specs[Command::kFig3].qstar_max)->capture_default_str();
  fig3->add_option("--qstar-steps", specs[Command::kFig3].qstar_steps)->capture_default_str();

  CLI::App* cycle = make(Command::kCycle, "one finite-time cycle, stroke by stroke");
  cycle->add_option("--r", flags[Command::kCycle].r, "squeezing parameter")->expected(1);
  cycle->add_option("--tau", flags[Command::kCycle].tau, "stroke duration in periods, or 'sudden'")
      ->capture_default_str();

  CLI::App* verify = make(Command::kVerify, "randomized self-checks; exit 1 on any failure");
  verify->add_option("--samples", specs[Command::kVerify].samples, "random theorem samples")->capture_default_str();
  verify->add_option("--inject-fault", flags[Command::kVerify].fault)
      ->check(CLI::IsMember({"flip-w-comp"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : otto::cli::kBadArguments;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const Command c = commands.at(chosen);
  SweepSpec spec = specs[c];
  const Flags& f = flags[c];
  spec.params.omega = otto::Frequency(f.omega);
  spec.params.beta_h = otto::InverseTemperature(f.beta_h);
  spec.params.beta_c = otto::InverseTemperature(f.beta_c);
  if (!f.r.empty()) spec.r_values = f.r;
  if (f.method == "rk4") {
    spec.integrator.method = otto::IntegrationMethod::kRungeKutta4;
  } else if (f.method == "adaptive") {
    spec.integrator.method = otto::IntegrationMethod::kAdaptive;
  }
  if (f.fault == "flip-w-comp") spec.fault = otto::Fault::kFlipCompressionWork;
  if (c == Command::kCycle) {
    try {
      if (f.tau == "sudden") {
        spec.tau = otto::StrokeDuration::sudden();
      } else {
        spec.tau = otto::StrokeDuration::periods(std::stod(f.tau));
      }
    } catch (const std::exception&) {
      std::cerr << "error: --tau must be a positive number of periods or 'sudden'\n";
      return otto::cli::kBadArguments;
    }
  }
  return otto::cli::run(spec, std::cout, std::cerr);
}
