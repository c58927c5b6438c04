// pasa_lab: policy-evaluation runs, cycle statistics and theorem checks.
//
//   pasa_lab evaluate [--config FILE] [--KEY VALUE ...] [--out STEM]
//   pasa_lab cycles   [--config FILE] [--KEY VALUE ...] [--out STEM]
//   pasa_lab theorem  [--config FILE] [--KEY VALUE ...] [--out STEM]
//
// --out STEM writes STEM.csv and STEM.json. Without it the CSV goes to
// stdout. Exit codes: 0 success, 1 theorem check failed, 2 invalid
// configuration, 3 runtime failure (convergence, capacity, I/O).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pasa/errors.hpp"
#include "pasa/experiment.hpp"

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::string out;
  std::map<std::string, std::optional<std::string>> overrides;
};

void add_common(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path,
                      "Config file: JSON object or key = value lines");
  cmd.app->add_option("--out", cmd.out, "Write STEM.csv and STEM.json");
  for (const std::string& key : pasa::config_keys()) {
    cmd.app->add_option("--" + key, cmd.overrides[key], "Override " + key);
  }
}

pasa::ExperimentConfig resolve(const Command& cmd, pasa::ExperimentConfig base) {
  pasa::ExperimentConfig config =
      cmd.config_path.empty() ? base : pasa::load_config_file(cmd.config_path, base);
  for (const std::string& key : pasa::config_keys()) {
    const auto& value = cmd.overrides.at(key);
    if (value) pasa::set_config_value(config, key, *value);
  }
  pasa::validate(config);
  return config;
}

std::string stem_of(std::string out) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e(ext);
    if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0) {
      return out.substr(0, out.size() - e.size());
    }
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw pasa::Error("cannot open '" + path + "' for writing");
  return file;
}

template <typename WriteCsv>
void emit(const std::string& out, WriteCsv write_csv, const nlohmann::json& doc) {
  if (out.empty()) {
    write_csv(std::cout);
    return;
  }
  const std::string stem = stem_of(out);
  {
    std::ofstream csv = open_output(stem + ".csv");
    write_csv(csv);
  }
  std::ofstream json = open_output(stem + ".json");
  json << doc.dump(2) << '\n';
}

int run_evaluate(const Command& cmd) {
  const pasa::ExperimentConfig config = resolve(cmd, {});
  const std::vector<pasa::RunRecord> runs = pasa::run_replications(config);
  nlohmann::json doc;
  doc["config"] = pasa::config_to_json(config);
  nlohmann::json summaries = nlohmann::json::array();
  for (const pasa::RunRecord& run : runs) summaries.push_back(pasa::run_summary_json(run));
  doc["runs"] = std::move(summaries);
  emit(cmd.out, [&](std::ostream& os) { pasa::write_runs_csv(os, runs); }, doc);
  if (!cmd.out.empty()) {
    for (const pasa::RunRecord& run : runs) {
      std::cerr << "replication " << run.replication << ": L = "
                << pasa::format_double(run.final_score().L) << ", C = "
                << run.recurrent_states << ", coverage = "
                << pasa::format_double(run.singleton_coverage) << '\n';
    }
  }
  return EXIT_SUCCESS;
}

int run_cycles(const Command& cmd) {
  const pasa::ExperimentConfig config = resolve(cmd, {});
  const std::vector<pasa::CycleStats> rows = pasa::run_cycle_study(config);
  nlohmann::json doc;
  doc["config"] = pasa::config_to_json(config);
  nlohmann::json out = nlohmann::json::array();
  for (const pasa::CycleStats& r : rows) {
    out.push_back({{"S", r.states},
                   {"trials", r.trials},
                   {"mean_c1", r.mean_c1},
                   {"mean_c1_ci", {r.ci_low, r.ci_high}},
                   {"var_c1", r.var_c1},
                   {"var_c1_ci", {r.var_c1_ci.low, r.var_c1_ci.high}},
                   {"mean_c", r.mean_c},
                   {"mean_c_ci", {r.mean_c_ci.low, r.mean_c_ci.high}},
                   {"var_c", r.var_c},
                   {"var_c_over_s_ln_s", r.var_c_ratio},
                   {"predicted_mean_c1", r.predicted_mean_c1},
                   {"predicted_var_c1", r.predicted_var_c1},
                   {"lemma1_bound", r.lemma1_bound}});
  }
  doc["rows"] = std::move(out);
  emit(cmd.out, [&](std::ostream& os) { pasa::write_cycle_csv(os, rows); }, doc);
  return EXIT_SUCCESS;
}

pasa::ExperimentConfig theorem_defaults() {
  pasa::ExperimentConfig c;
  c.cell_rule = pasa::CellRule::kCycles;
  c.eta = 0.01;
  c.nu = 1000;
  c.theta_threshold = 0.002;
  c.iterations = 500'000;
  c.replications = 10;
  return c;
}

int run_theorem(const Command& cmd) {
  const pasa::ExperimentConfig config = resolve(cmd, theorem_defaults());
  const pasa::TheoremReport report = pasa::run_theorem_check(config);
  nlohmann::json doc;
  doc["config"] = pasa::config_to_json(config);
  doc["report"] = pasa::theorem_report_json(report);
  emit(
      cmd.out,
      [&](std::ostream& os) {
        os << "replication,C,X,singleton_coverage,rho_stable_final_third,L,"
              "L_baseline,L_outside_recurrent,passed\n";
        for (const pasa::TheoremOutcome& o : report.outcomes) {
          os << o.replication << ',' << o.recurrent_states << ',' << o.cells << ','
             << pasa::format_double(o.singleton_coverage) << ','
             << (o.rho_stable_final_third ? 1 : 0) << ','
             << pasa::format_double(o.L) << ',' << pasa::format_double(o.L_baseline)
             << ',' << pasa::format_double(o.L_outside_recurrent) << ','
             << (o.passed() ? 1 : 0) << '\n';
        }
      },
      doc);
  std::cerr << report.passes() << " of " << report.outcomes.size()
            << " replications passed (" << report.required_passes << " required)\n";
  return report.passed() ? EXIT_SUCCESS : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive state aggregation experiments"};
  app.require_subcommand(1);

  Command evaluate{app.add_subcommand("evaluate", "Policy-evaluation runs")};
  Command cycles{app.add_subcommand("cycles", "Cycle statistics of random maps")};
  Command theorem{app.add_subcommand("theorem", "Singleton-coverage mechanism check")};
  for (Command* cmd : {&evaluate, &cycles, &theorem}) add_common(*cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*evaluate.app) return run_evaluate(evaluate);
    if (*cycles.app) return run_cycles(cycles);
    return run_theorem(theorem);
  } catch (const pasa::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
