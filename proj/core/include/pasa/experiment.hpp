#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pasa/cycles.hpp"

namespace pasa {

enum class Architecture {
  kPasa,     // B base cells refined online to X cells
  kUniform,  // X fixed equal cells, no adaptation
};

enum class CellRule {
  kFixed,   // X as configured
  kCycles,  // X = min(S, C * ceil(log2 S) + B) from the instance's cycles
};

struct ExperimentConfig {
  std::string run_id = "run";
  std::size_t S = 256;
  std::size_t A = 2;
  std::size_t B = 16;
  std::size_t X = 64;
  double delta = 1e-3;
  double delta_pi = 1e-3;
  double gamma = 0.9;
  NoiseKind noise = NoiseKind::kUniform;
  double eta = 0.01;
  double theta_threshold = 0.02;
  std::size_t nu = 0;  // 0: max(1000, 10 X)
  double alpha = 0.05;
  std::uint64_t iterations = 100'000;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  // Score every this many iterations; 0: 10 * nu.
  std::uint64_t score_interval = 0;
  Architecture architecture = Architecture::kPasa;
  CellRule cell_rule = CellRule::kFixed;
  // Absolute target for L and for L outside the recurrent set.
  double epsilon2_target = 0.01;
  // Constant in X >= K sqrt(S) ln S log2 S; reported, not enforced.
  double k_const = 0.7;
  // Confidence level of reported intervals.
  double confidence = 0.99;
  // Theorem check: PASA's L must be at most this fraction of the uniform
  // baseline's L, and this fraction of replications must pass.
  double relative_target = 0.1;
  double pass_fraction = 0.8;
  // Cycle study.
  std::size_t trials = 2000;
  std::vector<std::size_t> s_grid = {256, 1024, 4096};
  // Worker threads for replications and trials; 0: hardware concurrency.
  unsigned threads = 1;
  std::size_t exact_cap = 16384;
};

// Every settable key, in documentation order.
const std::vector<std::string>& config_keys();

// Parses `value` into the field named `key`. Throws ConfigError for unknown
// keys or unparsable values.
void set_config_value(ExperimentConfig& config, std::string_view key,
                      std::string_view value);

// Either a JSON object or flat `key = value` lines ('#' starts a comment).
ExperimentConfig parse_config_text(std::string_view text,
                                   ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base = {});

// Throws ConfigError describing the first violated range.
void validate(const ExperimentConfig& config);

nlohmann::json config_to_json(const ExperimentConfig& config);

std::size_t scoring_interval(const ExperimentConfig& config, std::size_t cells);

struct ScorePoint {
  std::uint64_t t = 0;
  double L = 0.0;
  std::optional<double> mse;
  double L_outside_recurrent = 0.0;
  std::size_t rho_changes = 0;  // cumulative
  double singleton_coverage = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  std::size_t replication = 0;
  std::uint64_t instance_seed = 0;
  std::size_t cells = 0;  // X actually used
  std::vector<ScorePoint> series;
  // Cycle structure of the deterministic skeleton under preferred actions.
  std::size_t recurrent_states = 0;  // C
  std::size_t first_cycle = 0;       // C_1
  std::size_t cycle_count = 0;
  double singleton_coverage = 0.0;
  std::size_t rho_changes = 0;
  // Iterations at which a reselection changed rho.
  std::vector<std::uint64_t> rho_change_times;
  std::vector<std::size_t> final_rho;
  double wall_clock_seconds = 0.0;

  const ScorePoint& final_score() const { return series.back(); }
};

// X for one instance under the configured rule.
std::size_t cells_for_instance(const ExperimentConfig& config,
                               std::size_t recurrent_states);

// One replication: builds the instance from derived seeds, runs
// step -> td_update -> PASA tick every iteration, and scores at t = 0, every
// scoring interval, and at the end. Errors are rethrown with the run id and
// replication prepended.
RunRecord run_policy_evaluation(const ExperimentConfig& config,
                                std::size_t replication = 0);

// All replications; results ordered by replication index.
std::vector<RunRecord> run_replications(const ExperimentConfig& config);

// One monte_carlo_cycle_stats row per S in config.s_grid.
std::vector<CycleStats> run_cycle_study(const ExperimentConfig& config);

struct TheoremOutcome {
  std::size_t replication = 0;
  std::size_t recurrent_states = 0;
  std::size_t cells = 0;
  bool all_recurrent_singleton = false;  // (a)
  bool rho_stable_final_third = false;   // (b)
  bool relative_improvement = false;     // (c) against the uniform baseline
  bool absolute_target = false;          // L and outside-L <= epsilon2
  double L = 0.0;
  double L_outside_recurrent = 0.0;
  double L_baseline = 0.0;
  double singleton_coverage = 0.0;
  std::optional<std::uint64_t> last_rho_change;

  bool passed() const noexcept {
    return all_recurrent_singleton && rho_stable_final_third &&
           relative_improvement;
  }
};

struct TheoremReport {
  std::vector<TheoremOutcome> outcomes;
  std::size_t required_passes = 0;
  std::size_t passes() const noexcept;
  bool passed() const noexcept { return passes() >= required_passes; }
};

// Runs PASA and the uniform baseline for each replication and evaluates
// the three clauses. Requires delta > 0.
TheoremReport run_theorem_check(const ExperimentConfig& config);

// Frozen columns: run_id,replication,t,L,mse,rho_changes,singleton_coverage
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);

struct RunCsvRow {
  std::string run_id;
  std::size_t replication = 0;
  std::uint64_t t = 0;
  double L = 0.0;
  std::optional<double> mse;
  std::size_t rho_changes = 0;
  double singleton_coverage = 0.0;
};
std::vector<RunCsvRow> read_runs_csv(std::istream& in);

// S,trials,mean_c1,var_c1,mean_c,var_c,ci_low,ci_high,predicted_mean_c1,
// predicted_var_c1,lemma1_bound
void write_cycle_csv(std::ostream& out, const std::vector<CycleStats>& rows);

nlohmann::json run_summary_json(const RunRecord& run);
nlohmann::json theorem_report_json(const TheoremReport& report);

// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace pasa
