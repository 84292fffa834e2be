#pragma once

// Subcommand bodies of the `otto` executable. Each writes to a stream and
// returns a process exit code, so they can be driven from tests without
// spawning processes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "otto/core.hpp"
#include "otto/dynamics.hpp"
#include "otto/verify.hpp"

namespace otto::cli {

enum class Command { kFig1, kFig2, kFig3, kCycle, kVerify };

[[nodiscard]] const char* to_string(Command command);

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kBadArguments = 2,
  kNumericalFailure = 3,
};

/// Evenly spaced points from min to max inclusive; a single point is min.
struct Grid {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 1;

  [[nodiscard]] std::vector<double> values() const;
};

struct SweepSpec {
  Command command = Command::kFig1;
  EngineParams params;
  /// Squeezing values for fig2 and cycle (cycle uses the first).
  std::vector<double> r_values{0.4, 0.8, 1.2};
  Grid r_grid{0.0, 2.0, 401};
  /// Stroke durations in periods; 0 means sudden.
  Grid tau_grid{0.05, 10.0, 400};
  double qstar_max = 2.0;
  std::size_t qstar_steps = 101;
  StrokeDuration tau = StrokeDuration::periods(1.0);
  IntegratorConfig integrator;
  bool oracle = false;
  std::uint64_t seed = 20240611;
  unsigned jobs = 1;
  /// Empty or "-" writes to stdout.
  std::string out;
  std::size_t samples = 100'000;
  Fault fault = Fault::kNone;
};

/// Defaults reproducing the corresponding figure, or the verify/cycle presets.
[[nodiscard]] SweepSpec default_spec(Command command);

/// Throws InvalidParameter on empty or unordered grids and out-of-range knobs.
void validate(const SweepSpec& spec);

/// Single `#` line with the code version and every setting except the job count.
[[nodiscard]] std::string metadata_line(const SweepSpec& spec);

/// Shortest round-trip decimal; "nan", "inf", "-inf" for non-finite values.
[[nodiscard]] std::string format_number(double x);

int cmd_fig1(const SweepSpec& spec, std::ostream& out);
int cmd_fig2(const SweepSpec& spec, std::ostream& out);
int cmd_fig3(const SweepSpec& spec, std::ostream& out);
int cmd_cycle(const SweepSpec& spec, std::ostream& out);
int cmd_verify(const SweepSpec& spec, std::ostream& out);

/// Validates, opens spec.out, dispatches, and maps exceptions to exit codes.
/// Diagnostics go to `err`.
int run(const SweepSpec& spec, std::ostream& stdout_stream, std::ostream& err);

}  // namespace otto::cli
