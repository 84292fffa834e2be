#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "otto/analytic_cycle.hpp"
#include "otto/commands.hpp"

using namespace otto;
using namespace otto::cli;

namespace {

struct Csv {
  std::string metadata;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse(const std::string& text) {
  Csv csv;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, csv.metadata);
  std::getline(ss, line);
  csv.header = split(line);
  while (std::getline(ss, line)) {
    std::vector<double> row;
    for (const std::string& c : split(line)) row.push_back(std::strtod(c.c_str(), nullptr));
    csv.rows.push_back(row);
  }
  return csv;
}

std::string run_ok(const SweepSpec& spec) {
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run(spec, out, err), kSuccess) << err.str();
  return out.str();
}

int exit_code(const SweepSpec& spec) {
  std::ostringstream out;
  std::ostringstream err;
  return run(spec, out, err);
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 2.0 * kPi, 1e-300, -7.25, 0.0}) {
    EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
  }
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(format_number(INFINITY), "inf");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(Grid, Endpoints) {
  const std::vector<double> v = Grid{0.05, 10.0, 400}.values();
  ASSERT_EQ(v.size(), 400u);
  EXPECT_EQ(v.front(), 0.05);
  EXPECT_EQ(v.back(), 10.0);
  EXPECT_EQ((Grid{0.3, 0.3, 1}.values()), (std::vector<double>{0.3}));
}

TEST(Metadata, RecordsProvenanceButNotJobs) {
  SweepSpec spec = default_spec(Command::kFig2);
  spec.jobs = 7;
  const std::string m = metadata_line(spec);
  EXPECT_EQ(m.rfind("# otto ", 0), 0u);
  for (const char* key : {"command=fig2", "omega=", "beta_h=0.1", "beta_c=1", "r=0.4,0.8,1.2", "tau_min=0.05",
                          "tau_max=10", "tau_steps=400", "step=0.001", "method=magnus4", "seed="}) {
    EXPECT_NE(m.find(key), std::string::npos) << key;
  }
  EXPECT_EQ(m.find("jobs"), std::string::npos);
  EXPECT_EQ(m.find('\n'), std::string::npos);
}

TEST(Fig1, SchemaAndShape) {
  const Csv csv = parse(run_ok(default_spec(Command::kFig1)));
  EXPECT_EQ(csv.metadata[0], '#');
  EXPECT_EQ(csv.header, (std::vector<std::string>{"r", "eta_qs", "eta_carnot", "engine_flag"}));
  ASSERT_EQ(csv.rows.size(), 401u);
  const double rm = r_max(EngineParams{});
  double top = 0.0;
  for (const auto& row : csv.rows) {
    const bool engine = row[0] > 0.0 && row[0] <= rm;
    EXPECT_EQ(row[3], engine ? 1.0 : 0.0);
    if (row[0] > rm) {
      EXPECT_TRUE(std::isnan(row[1]));
    } else {
      EXPECT_LE(row[1], row[2] + 1e-12);
      top = std::max(top, row[1]);
    }
  }
  EXPECT_NEAR(top, 0.9, 2e-3);
}

TEST(Fig1, SinglePointAtZero) {
  SweepSpec spec = default_spec(Command::kFig1);
  spec.r_grid = {0.0, 0.0, 1};
  const Csv csv = parse(run_ok(spec));
  ASSERT_EQ(csv.rows.size(), 1u);
  EXPECT_EQ(csv.rows[0][1], 0.0);
  EXPECT_EQ(csv.rows[0][3], 0.0);
}

TEST(Fig2, SchemaAndThreadIndependence) {
  SweepSpec spec = default_spec(Command::kFig2);
  spec.tau_grid = {0.0, 3.0, 13};
  const std::string serial = run_ok(spec);
  spec.jobs = 4;
  const std::string threaded = run_ok(spec);
  EXPECT_EQ(serial, threaded);
  const Csv csv = parse(serial);
  EXPECT_EQ(csv.header, (std::vector<std::string>{"r", "tau_periods", "eta", "sigma_total", "q_star_comp",
                                                  "q_star_exp", "eta_qs_reference"}));
  ASSERT_EQ(csv.rows.size(), 39u);
  EXPECT_EQ(csv.rows[0][0], 0.4);
  EXPECT_EQ(csv.rows[13][0], 0.8);
  EXPECT_EQ(csv.rows[0][1], 0.0);
  EXPECT_NEAR(csv.rows[0][4], std::cosh(0.8), 1e-12);
  for (const auto& row : csv.rows) {
    EXPECT_GE(row[4], 1.0 - 1e-12);
    EXPECT_GT(row[3], 0.0);
    if (!std::isnan(row[2])) EXPECT_LE(row[2], row[6] + 1e-12);
  }
}

TEST(Fig2, OracleBackendMatches) {
  SweepSpec spec = default_spec(Command::kFig2);
  spec.r_values = {0.4};
  spec.tau_grid = {0.5, 1.0, 2};
  const Csv gauss = parse(run_ok(spec));
  spec.oracle = true;
  const Csv fock = parse(run_ok(spec));
  ASSERT_EQ(gauss.rows.size(), fock.rows.size());
  for (std::size_t i = 0; i < gauss.rows.size(); ++i) {
    for (std::size_t j = 2; j < 6; ++j) {
      EXPECT_NEAR(gauss.rows[i][j], fock.rows[i][j], 1e-6);
    }
  }
}

TEST(Fig3, SchemaBoundsAndConsistencyWithFig1) {
  const Csv csv = parse(run_ok(default_spec(Command::kFig3)));
  EXPECT_EQ(csv.header, (std::vector<std::string>{"r", "q_star", "eta", "engine_flag"}));
  ASSERT_EQ(csv.rows.size(), 201u * 101u);
  SweepSpec f1 = default_spec(Command::kFig1);
  f1.r_grid = {0.0, 2.0, 201};
  const Csv line = parse(run_ok(f1));
  double best = 0.0;
  double best_q = 0.0;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    EXPECT_EQ(row[3], std::isnan(row[2]) ? 0.0 : 1.0);
    if (std::isnan(row[2])) continue;
    EXPECT_LE(row[2], 0.9 + 1e-10);
    if (row[2] > best) {
      best = row[2];
      best_q = row[1];
    }
    if (row[1] == 1.0) {
      EXPECT_EQ(row[2], line.rows[i / 101][1]);
    }
  }
  EXPECT_EQ(best_q, 1.0);
  EXPECT_NEAR(best, 0.9, 2e-3);
}

TEST(Cycle, TextReport) {
  SweepSpec spec = default_spec(Command::kCycle);
  spec.tau = StrokeDuration::sudden();
  const std::string text = run_ok(spec);
  for (const char* key : {"compression,", "cooling,", "expansion,", "heating,", "eta = not an engine", "tau=sudden"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
}

TEST(VerifyCommand, ExitCodes) {
  SweepSpec spec = default_spec(Command::kVerify);
  spec.samples = 2000;
  spec.oracle = false;
  EXPECT_EQ(exit_code(spec), kSuccess);
  spec.fault = Fault::kFlipCompressionWork;
  EXPECT_EQ(exit_code(spec), kVerificationFailure);
}

TEST(Run, BadArguments) {
  SweepSpec spec = default_spec(Command::kFig1);
  spec.params.beta_h = InverseTemperature(2.0);
  EXPECT_EQ(exit_code(spec), kBadArguments);
  spec = default_spec(Command::kFig1);
  spec.r_grid = {1.0, 0.5, 3};
  EXPECT_EQ(exit_code(spec), kBadArguments);
  spec.r_grid = {0.0, 1.0, 0};
  EXPECT_EQ(exit_code(spec), kBadArguments);
  spec = default_spec(Command::kFig3);
  spec.qstar_max = 0.5;
  EXPECT_EQ(exit_code(spec), kBadArguments);
  spec = default_spec(Command::kFig1);
  spec.out = "/nonexistent-dir/out.csv";
  EXPECT_EQ(exit_code(spec), kBadArguments);
}

TEST(Run, NumericalFailure) {
  SweepSpec spec = default_spec(Command::kCycle);
  spec.integrator.max_steps = 10;
  EXPECT_EQ(exit_code(spec), kNumericalFailure);
}
