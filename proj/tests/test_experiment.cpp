#include <gtest/gtest.h>

#include <sstream>

#include "pasa/errors.hpp"
#include "pasa/experiment.hpp"
#include "pasa/values.hpp"

using namespace pasa;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.S = 48;
  c.B = 4;
  c.X = 12;
  c.delta = 0.05;
  c.delta_pi = 0.05;
  c.iterations = 6000;
  c.nu = 500;
  c.score_interval = 1500;
  return c;
}

void expect_same(const RunRecord& a, const RunRecord& b) {
  ASSERT_EQ(a.series.size(), b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    EXPECT_EQ(a.series[i].t, b.series[i].t);
    EXPECT_EQ(a.series[i].L, b.series[i].L);
    EXPECT_EQ(a.series[i].mse, b.series[i].mse);
    EXPECT_EQ(a.series[i].rho_changes, b.series[i].rho_changes);
  }
  EXPECT_EQ(a.final_rho, b.final_rho);
  EXPECT_EQ(a.rho_change_times, b.rho_change_times);
  EXPECT_EQ(a.instance_seed, b.instance_seed);
}

}  // namespace

TEST(Config, ParsesKeyValueText) {
  const ExperimentConfig c = parse_config_text(
      "# comment\nS = 512\nX=40\n delta = 0.002  # trailing\nnoise = uniform_excluding_current\n"
      "architecture = uniform\ns_grid = 16, 32\n");
  EXPECT_EQ(c.S, 512u);
  EXPECT_EQ(c.X, 40u);
  EXPECT_EQ(c.delta, 0.002);
  EXPECT_EQ(c.noise, NoiseKind::kUniformExcludingCurrent);
  EXPECT_EQ(c.architecture, Architecture::kUniform);
  EXPECT_EQ(c.s_grid, (std::vector<std::size_t>{16, 32}));
}

TEST(Config, ParsesJsonAndRoundTrips) {
  const ExperimentConfig c = parse_config_text(
      R"({"S": 128, "gamma": 0.75, "run_id": "abc", "s_grid": [8, 9], "cell_rule": "cycles"})");
  EXPECT_EQ(c.S, 128u);
  EXPECT_EQ(c.gamma, 0.75);
  EXPECT_EQ(c.run_id, "abc");
  EXPECT_EQ(c.cell_rule, CellRule::kCycles);
  const ExperimentConfig back = parse_config_text(config_to_json(c).dump());
  EXPECT_EQ(config_to_json(back), config_to_json(c));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config_text("bogus = 1"), ConfigError);
  EXPECT_THROW(parse_config_text("S = -3"), ConfigError);
  EXPECT_THROW(parse_config_text("delta = abc"), ConfigError);
  EXPECT_THROW(parse_config_text("no equals sign"), ConfigError);
  EXPECT_THROW(parse_config_text("{not json"), ConfigError);
  EXPECT_THROW(parse_config_text("noise = gaussian"), ConfigError);
  ExperimentConfig c;
  c.X = c.B - 1;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.replications = 0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.gamma = 1.0;
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/config.txt"), ConfigError);
  EXPECT_NO_THROW(validate(ExperimentConfig{}));
}

TEST(Config, Intervals) {
  ExperimentConfig c;
  c.nu = 0;
  EXPECT_EQ(scoring_interval(c, 64), 10000u);
  EXPECT_EQ(scoring_interval(c, 300), 30000u);
  c.nu = 100;
  EXPECT_EQ(scoring_interval(c, 64), 1000u);
  c.score_interval = 7;
  EXPECT_EQ(scoring_interval(c, 64), 7u);
}

TEST(Config, CellsForInstance) {
  ExperimentConfig c;
  c.S = 256;
  c.B = 16;
  c.cell_rule = CellRule::kCycles;
  EXPECT_EQ(cells_for_instance(c, 10), 10u * 8 + 16);
  EXPECT_EQ(cells_for_instance(c, 40), 256u);
  c.cell_rule = CellRule::kFixed;
  EXPECT_EQ(cells_for_instance(c, 10), c.X);
}

TEST(RunPolicyEvaluation, ZeroIterationsScoresOnce) {
  ExperimentConfig c = small_config();
  c.iterations = 0;
  const RunRecord r = run_policy_evaluation(c);
  ASSERT_EQ(r.series.size(), 1u);
  EXPECT_EQ(r.series[0].t, 0u);
  EXPECT_TRUE(r.series[0].mse.has_value());
  EXPECT_EQ(r.rho_changes, 0u);
}

TEST(RunPolicyEvaluation, SeriesIsMonotoneAndComplete) {
  const RunRecord r = run_policy_evaluation(small_config());
  ASSERT_EQ(r.series.size(), 5u);
  for (std::size_t i = 1; i < r.series.size(); ++i) {
    EXPECT_GT(r.series[i].t, r.series[i - 1].t);
    EXPECT_GE(r.series[i].rho_changes, r.series[i - 1].rho_changes);
  }
  EXPECT_EQ(r.series.back().t, 6000u);
  for (const ScorePoint& p : r.series) {
    EXPECT_GE(p.L, 0.0);
    EXPECT_LE(p.L_outside_recurrent, p.L);
  }
  EXPECT_GE(r.recurrent_states, 1u);
  EXPECT_GE(r.first_cycle, 1u);
  EXPECT_EQ(r.final_rho.size(), 8u);
}

TEST(RunPolicyEvaluation, Deterministic) {
  expect_same(run_policy_evaluation(small_config(), 2), run_policy_evaluation(small_config(), 2));
}

TEST(RunPolicyEvaluation, ReplicationsAreIndependentOfCountAndThreads) {
  ExperimentConfig c = small_config();
  c.replications = 3;
  const auto serial = run_replications(c);
  c.threads = 3;
  const auto parallel = run_replications(c);
  c.replications = 1;
  c.threads = 1;
  const auto single = run_replications(c);
  ASSERT_EQ(serial.size(), 3u);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_EQ(serial[r].replication, r);
    expect_same(serial[r], parallel[r]);
  }
  expect_same(serial[0], single[0]);
  EXPECT_NE(serial[0].instance_seed, serial[1].instance_seed);
}

TEST(RunPolicyEvaluation, TabularLimitApproachesTrueValues) {
  ExperimentConfig c;
  c.S = 16;
  c.B = 16;
  c.X = 16;
  c.delta = 0.05;
  c.delta_pi = 0.3;
  c.gamma = 0.8;
  c.nu = 1'000'000;
  c.iterations = 300'000;
  c.score_interval = 300'000;
  const RunRecord r = run_policy_evaluation(c);
  ASSERT_TRUE(r.final_score().mse.has_value());
  // max |Q| <= 1 / (1 - gamma) = 5.
  EXPECT_LT(*r.final_score().mse, 0.25 * 0.25);
  EXPECT_LT(*r.final_score().mse, *r.series.front().mse / 100);
  EXPECT_EQ(r.rho_changes, 0u);
}

TEST(RunPolicyEvaluation, UniformArchitectureNeverChangesRho) {
  ExperimentConfig c = small_config();
  c.architecture = Architecture::kUniform;
  const RunRecord r = run_policy_evaluation(c);
  EXPECT_EQ(r.rho_changes, 0u);
  EXPECT_TRUE(r.final_rho.empty());
}

TEST(RunPolicyEvaluation, ErrorsCarryRunContext) {
  ExperimentConfig c = small_config();
  c.delta = 0.0;
  c.delta_pi = 0.0;
  c.S = 64;
  c.run_id = "ctx";
  // A deterministic chain on a random map has several closed classes for
  // this seed, so there is no unique stationary distribution.
  try {
    run_policy_evaluation(c);
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("run 'ctx' replication 0"), std::string::npos);
  }
  c.exact_cap = 1;
  c.delta = 0.1;
  EXPECT_NO_THROW(run_policy_evaluation(c));
}

TEST(Csv, RunsRoundTripExactly) {
  ExperimentConfig c = small_config();
  c.replications = 2;
  c.run_id = "rt";
  const auto runs = run_replications(c);
  std::stringstream buffer;
  write_runs_csv(buffer, runs);
  const auto rows = read_runs_csv(buffer);
  std::size_t i = 0;
  for (const RunRecord& r : runs) {
    for (const ScorePoint& p : r.series) {
      ASSERT_LT(i, rows.size());
      EXPECT_EQ(rows[i].run_id, "rt");
      EXPECT_EQ(rows[i].replication, r.replication);
      EXPECT_EQ(rows[i].t, p.t);
      EXPECT_EQ(rows[i].L, p.L);
      EXPECT_EQ(rows[i].mse, p.mse);
      EXPECT_EQ(rows[i].rho_changes, p.rho_changes);
      EXPECT_EQ(rows[i].singleton_coverage, p.singleton_coverage);
      ++i;
    }
  }
  EXPECT_EQ(i, rows.size());
  std::stringstream bad("wrong,header\n");
  EXPECT_THROW(read_runs_csv(bad), InvalidArgument);
}

TEST(Csv, MissingMseRoundTrips) {
  ExperimentConfig c = small_config();
  c.exact_cap = 1;
  const auto runs = run_replications(c);
  EXPECT_FALSE(runs[0].series[0].mse.has_value());
  std::stringstream buffer;
  write_runs_csv(buffer, runs);
  const auto rows = read_runs_csv(buffer);
  EXPECT_FALSE(rows[0].mse.has_value());
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(CycleStudy, TwoTrialsEmitValidCsv) {
  ExperimentConfig c;
  c.trials = 2;
  c.s_grid = {16, 64};
  const auto rows = run_cycle_study(c);
  ASSERT_EQ(rows.size(), 2u);
  std::stringstream out;
  write_cycle_csv(out, rows);
  std::string line;
  std::getline(out, line);
  EXPECT_EQ(line,
            "S,trials,mean_c1,var_c1,mean_c,var_c,ci_low,ci_high,predicted_mean_c1,"
            "predicted_var_c1,lemma1_bound");
  int count = 0;
  while (std::getline(out, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
    ++count;
  }
  EXPECT_EQ(count, 2);
}

TEST(TheoremCheck, RejectsZeroDelta) {
  ExperimentConfig c;
  c.delta = 0.0;
  EXPECT_THROW(run_theorem_check(c), ConfigError);
}

TEST(TheoremCheck, NoHeadroomFailsSingletonClause) {
  ExperimentConfig c;
  c.S = 256;
  c.B = 16;
  c.X = 16;
  c.iterations = 20000;
  c.replications = 2;
  const TheoremReport report = run_theorem_check(c);
  ASSERT_EQ(report.outcomes.size(), 2u);
  EXPECT_EQ(report.required_passes, 2u);
  for (const TheoremOutcome& o : report.outcomes) {
    EXPECT_FALSE(o.all_recurrent_singleton);
    EXPECT_FALSE(o.passed());
    EXPECT_EQ(o.cells, 16u);
  }
  EXPECT_FALSE(report.passed());
  const nlohmann::json doc = theorem_report_json(report);
  EXPECT_EQ(doc["outcomes"].size(), 2u);
  EXPECT_FALSE(doc["passed"].get<bool>());
}
