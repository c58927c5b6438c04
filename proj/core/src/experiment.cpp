#include "pasa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "pasa/errors.hpp"
#include "pasa/markov.hpp"
#include "pasa/mdp.hpp"
#include "pasa/pasa.hpp"
#include "pasa/random.hpp"
#include "pasa/sarsa.hpp"
#include "pasa/score.hpp"
#include "pasa/values.hpp"

namespace pasa {

namespace {

constexpr double kStationaryTol = 1e-12;
constexpr double kExactTol = 1e-9;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: '" + std::string(key) +
                      "' expects a non-negative integer, got '" + s + "'");
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("config: '" + std::string(key) +
                      "' expects a number, got '" + s + "'");
  }
  return value;
}

std::vector<std::size_t> parse_grid(std::string_view key,
                                    std::string_view text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[' && s.back() == ']') {
    s = s.substr(1, s.size() - 2);
  }
  std::vector<std::size_t> grid;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    grid.push_back(parse_integer<std::size_t>(key, item));
  }
  if (grid.empty()) throw ConfigError("config: '" + std::string(key) + "' is empty");
  return grid;
}

struct Field {
  std::string name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<nlohmann::json(const ExperimentConfig&)> get;
};

template <typename T>
Field integer_field(std::string name, T ExperimentConfig::*member) {
  return {name,
          [name, member](ExperimentConfig& c, std::string_view v) {
            c.*member = parse_integer<T>(name, v);
          },
          [member](const ExperimentConfig& c) { return nlohmann::json(c.*member); }};
}

Field real_field(std::string name, double ExperimentConfig::*member) {
  return {name,
          [name, member](ExperimentConfig& c, std::string_view v) {
            c.*member = parse_real(name, v);
          },
          [member](const ExperimentConfig& c) { return nlohmann::json(c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"run_id",
                 [](ExperimentConfig& c, std::string_view v) { c.run_id = trim(v); },
                 [](const ExperimentConfig& c) { return nlohmann::json(c.run_id); }});
    f.push_back(integer_field("S", &ExperimentConfig::S));
    f.push_back(integer_field("A", &ExperimentConfig::A));
    f.push_back(integer_field("B", &ExperimentConfig::B));
    f.push_back(integer_field("X", &ExperimentConfig::X));
    f.push_back(real_field("delta", &ExperimentConfig::delta));
    f.push_back(real_field("delta_pi", &ExperimentConfig::delta_pi));
    f.push_back(real_field("gamma", &ExperimentConfig::gamma));
    f.push_back({"noise",
                 [](ExperimentConfig& c, std::string_view v) {
                   try {
                     c.noise = parse_noise_kind(trim(v));
                   } catch (const InvalidArgument& e) {
                     throw ConfigError(std::string("config: ") + e.what());
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return nlohmann::json(std::string(to_string(c.noise)));
                 }});
    f.push_back(real_field("eta", &ExperimentConfig::eta));
    f.push_back(real_field("theta_threshold", &ExperimentConfig::theta_threshold));
    f.push_back(integer_field("nu", &ExperimentConfig::nu));
    f.push_back(real_field("alpha", &ExperimentConfig::alpha));
    f.push_back(integer_field("iterations", &ExperimentConfig::iterations));
    f.push_back(integer_field("replications", &ExperimentConfig::replications));
    f.push_back(integer_field("seed", &ExperimentConfig::seed));
    f.push_back(integer_field("score_interval", &ExperimentConfig::score_interval));
    f.push_back({"architecture",
                 [](ExperimentConfig& c, std::string_view v) {
                   const std::string s = trim(v);
                   if (s == "pasa") {
                     c.architecture = Architecture::kPasa;
                   } else if (s == "uniform") {
                     c.architecture = Architecture::kUniform;
                   } else {
                     throw ConfigError("config: architecture must be 'pasa' or 'uniform'");
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return nlohmann::json(c.architecture == Architecture::kPasa
                                             ? "pasa" : "uniform");
                 }});
    f.push_back({"cell_rule",
                 [](ExperimentConfig& c, std::string_view v) {
                   const std::string s = trim(v);
                   if (s == "fixed") {
                     c.cell_rule = CellRule::kFixed;
                   } else if (s == "cycles") {
                     c.cell_rule = CellRule::kCycles;
                   } else {
                     throw ConfigError("config: cell_rule must be 'fixed' or 'cycles'");
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return nlohmann::json(c.cell_rule == CellRule::kFixed
                                             ? "fixed" : "cycles");
                 }});
    f.push_back(real_field("epsilon2_target", &ExperimentConfig::epsilon2_target));
    f.push_back(real_field("k_const", &ExperimentConfig::k_const));
    f.push_back(real_field("confidence", &ExperimentConfig::confidence));
    f.push_back(real_field("relative_target", &ExperimentConfig::relative_target));
    f.push_back(real_field("pass_fraction", &ExperimentConfig::pass_fraction));
    f.push_back(integer_field("trials", &ExperimentConfig::trials));
    f.push_back({"s_grid",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.s_grid = parse_grid("s_grid", v);
                 },
                 [](const ExperimentConfig& c) { return nlohmann::json(c.s_grid); }});
    f.push_back(integer_field("threads", &ExperimentConfig::threads));
    f.push_back(integer_field("exact_cap", &ExperimentConfig::exact_cap));
    return f;
  }();
  return table;
}

std::string json_scalar_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += ',';
      joined += json_scalar_text(item);
    }
    return joined;
  }
  return value.dump();
}

std::size_t ceil_log2(std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

double coverage(const CellMap& map, std::span<const std::size_t> recurrent) {
  if (recurrent.empty()) return 1.0;
  std::size_t covered = 0;
  for (std::size_t s : recurrent) {
    if (map.members(map.cell_of(s)).size() == 1) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(recurrent.size());
}

template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t count, unsigned threads, Fn fn) {
  std::vector<Result> results(count);
  const std::size_t workers = std::clamp<std::size_t>(
      threads == 0 ? std::thread::hardware_concurrency() : threads, 1,
      std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            results[i] = fn(i);
          } catch (...) {
            const std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& config, std::string_view key,
                      std::string_view value) {
  for (const Field& f : fields()) {
    if (f.name == key) {
      f.set(config, value);
      return;
    }
  }
  throw ConfigError("config: unknown key '" + std::string(key) + "'");
}

ExperimentConfig parse_config_text(std::string_view text,
                                   ExperimentConfig base) {
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      set_config_value(base, key, json_scalar_text(value));
    }
    return base;
  }
  std::stringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(number) +
                        " is not of the form key = value");
    }
    set_config_value(base, trim(std::string_view(line).substr(0, eq)),
                     std::string_view(line).substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
  if (c.S == 0 || c.A == 0) fail("S and A must be positive");
  if (c.B == 0 || c.B > c.S) fail("B must lie in [1, S]");
  if (c.cell_rule == CellRule::kFixed && (c.X < c.B || c.X > c.S)) {
    fail("X must lie in [B, S]");
  }
  if (!(c.delta >= 0.0 && c.delta <= 1.0)) fail("delta must lie in [0, 1]");
  if (!(c.delta_pi >= 0.0 && c.delta_pi <= 1.0)) fail("delta_pi must lie in [0, 1]");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) fail("gamma must lie in [0, 1)");
  if (!(c.eta > 0.0 && c.eta <= 1.0)) fail("eta must lie in (0, 1]");
  if (!(c.theta_threshold > 0.0)) fail("theta_threshold must be positive");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  if (c.replications == 0) fail("replications must be at least 1");
  if (c.trials < 2) fail("trials must be at least 2");
  for (std::size_t s : c.s_grid) {
    if (s == 0) fail("s_grid entries must be positive");
  }
  if (!(c.confidence > 0.0 && c.confidence < 1.0)) fail("confidence must lie in (0, 1)");
  if (!(c.pass_fraction >= 0.0 && c.pass_fraction <= 1.0)) {
    fail("pass_fraction must lie in [0, 1]");
  }
  if (!(c.relative_target > 0.0)) fail("relative_target must be positive");
  if (c.run_id.find_first_of(",\n\r\"") != std::string::npos) {
    fail("run_id must not contain commas, quotes or newlines");
  }
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json doc = nlohmann::json::object();
  for (const Field& f : fields()) doc[f.name] = f.get(config);
  return doc;
}

std::size_t scoring_interval(const ExperimentConfig& config,
                             std::size_t cells) {
  if (config.score_interval != 0) return config.score_interval;
  PasaConfig pasa_config;
  pasa_config.nu = config.nu;
  return 10 * pasa_config.interval(cells);
}

std::size_t cells_for_instance(const ExperimentConfig& config,
                               std::size_t recurrent_states) {
  if (config.cell_rule == CellRule::kFixed) return config.X;
  const std::size_t wanted =
      recurrent_states * std::max<std::size_t>(1, ceil_log2(config.S)) + config.B;
  return std::min(config.S, wanted);
}

RunRecord run_policy_evaluation(const ExperimentConfig& config,
                                std::size_t replication) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  try {
    RunRecord record;
    record.config = config;
    record.replication = replication;
    record.instance_seed = derive_seed(config.seed, replication, Stream::kTrajectory);

    MdpModel model(config.S, config.A,
                   sample_skeleton(config.S, config.A,
                                   derive_seed(config.seed, replication, Stream::kSkeleton)),
                   sample_rewards(config.S, config.A,
                                  derive_seed(config.seed, replication, Stream::kRewards)),
                   config.delta, config.gamma, config.noise);
    model.seed = config.seed;
    const Policy policy = sample_policy(
        config.S, config.A, config.delta_pi,
        derive_seed(config.seed, replication, Stream::kPolicy));

    const StationaryDistribution psi =
        stationary_distribution(StateChain(model, policy), kStationaryTol);
    std::optional<ActionValues> q_true;
    if (config.S * config.A <= config.exact_cap) {
      q_true = exact_action_values(model, policy, kExactTol,
                                   {.max_unknowns = config.exact_cap});
    }

    const CycleDecomposition cycles = compute_cycles(successor_map(model, policy));
    const std::vector<bool> recurrent = cycles.recurrent_mask();
    record.recurrent_states = cycles.total();
    record.first_cycle = cycles.length(0);
    record.cycle_count = cycles.cycle_count();

    const std::size_t cells = cells_for_instance(config, cycles.total());
    if (cells < config.B || cells > config.S) {
      throw ConfigError("config: X must lie in [B, S]");
    }
    record.cells = cells;

    const bool adaptive = config.architecture == Architecture::kPasa;
    PasaConfig pasa_config;
    pasa_config.eta = config.eta;
    pasa_config.threshold = config.theta_threshold;
    pasa_config.nu = config.nu;
    std::optional<Pasa> pasa;
    CellMap fixed_map;
    if (adaptive) {
      pasa.emplace(PartitionTree(config.S, config.B, cells), pasa_config);
    } else {
      fixed_map = PartitionTree(config.S, cells, cells).convert();
    }
    auto current_map = [&]() -> const CellMap& {
      return adaptive ? pasa->map() : fixed_map;
    };

    CellValueTable table(cells, config.A);
    const std::size_t interval = scoring_interval(config, cells);

    auto record_point = [&](std::uint64_t t) {
      const ScoreReport report = score(table, current_map(), model, policy,
                                       psi.psi, q_true, recurrent);
      ScorePoint point;
      point.t = t;
      point.L = report.L;
      point.mse = report.mse;
      point.L_outside_recurrent = report.L_outside_recurrent;
      point.rho_changes = record.rho_changes;
      point.singleton_coverage = coverage(current_map(), cycles.union_states());
      record.series.push_back(point);
    };

    Rng rng = make_rng(record.instance_seed);
    std::uniform_int_distribution<std::size_t> start(0, config.S - 1);
    std::size_t state = start(rng);
    std::size_t action = policy.sample(state, rng);

    record_point(0);
    // Iterations are numbered from 1, so the first reselection happens after
    // nu observations rather than on the prior alone.
    for (std::uint64_t t = 1; t <= config.iterations; ++t) {
      const Transition tr = step_with_action(model, state, action, rng);
      const std::size_t next_action = policy.sample(tr.next_state, rng);
      td_update(table, current_map(),
                {state, action, tr.reward, tr.next_state, next_action},
                config.alpha, config.gamma);
      if (adaptive) {
        TickResult tick = pasa->tick(t, state);
        if (tick.rho_changes > 0) {
          record.rho_changes += tick.rho_changes;
          record.rho_change_times.push_back(t);
        }
        if (tick.map_changed) {
          table = handle_resplit(table, tick.previous_map, pasa->map());
        }
      }
      state = tr.next_state;
      action = next_action;
      if (t % interval == 0 || t == config.iterations) record_point(t);
    }

    record.singleton_coverage = coverage(current_map(), cycles.union_states());
    if (adaptive) {
      record.final_rho.assign(pasa->tree().rho().begin(), pasa->tree().rho().end());
    }
    record.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return record;
  } catch (const ConfigError&) {
    throw;
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("run '" + config.run_id + "' replication " +
                               std::to_string(replication) + ": " + e.what(),
                           e.residual());
  } catch (const CapacityError& e) {
    throw CapacityError("run '" + config.run_id + "' replication " +
                        std::to_string(replication) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("run '" + config.run_id + "' replication " +
                std::to_string(replication) + ": " + e.what());
  }
}

std::vector<RunRecord> run_replications(const ExperimentConfig& config) {
  validate(config);
  return parallel_map<RunRecord>(
      config.replications, config.threads,
      [&config](std::size_t r) { return run_policy_evaluation(config, r); });
}

std::vector<CycleStats> run_cycle_study(const ExperimentConfig& config) {
  validate(config);
  std::vector<CycleStats> rows;
  rows.reserve(config.s_grid.size());
  for (std::size_t s : config.s_grid) {
    rows.push_back(monte_carlo_cycle_stats(
        s, config.trials, derive_seed(config.seed, s, Stream::kCycleTrial),
        config.threads));
  }
  return rows;
}

std::size_t TheoremReport::passes() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      outcomes.begin(), outcomes.end(),
      [](const TheoremOutcome& o) { return o.passed(); }));
}

TheoremReport run_theorem_check(const ExperimentConfig& config) {
  validate(config);
  if (config.delta == 0.0) {
    throw ConfigError(
        "config: theorem check needs delta > 0; with delta = 0 the stationary "
        "distribution is not unique");
  }
  ExperimentConfig baseline = config;
  baseline.architecture = Architecture::kUniform;
  ExperimentConfig adaptive = config;
  adaptive.architecture = Architecture::kPasa;

  TheoremReport report;
  report.required_passes = static_cast<std::size_t>(
      std::ceil(config.pass_fraction * static_cast<double>(config.replications) - 1e-9));
  report.outcomes = parallel_map<TheoremOutcome>(
      config.replications, config.threads, [&](std::size_t r) {
        const RunRecord run = run_policy_evaluation(adaptive, r);
        const RunRecord base = run_policy_evaluation(baseline, r);
        TheoremOutcome o;
        o.replication = r;
        o.recurrent_states = run.recurrent_states;
        o.cells = run.cells;
        o.singleton_coverage = run.singleton_coverage;
        o.all_recurrent_singleton = run.singleton_coverage == 1.0;
        const std::uint64_t final_third_start =
            config.iterations - config.iterations / 3;
        if (!run.rho_change_times.empty()) {
          o.last_rho_change = run.rho_change_times.back();
        }
        o.rho_stable_final_third =
            !o.last_rho_change.has_value() || *o.last_rho_change < final_third_start;
        o.L = run.final_score().L;
        o.L_outside_recurrent = run.final_score().L_outside_recurrent;
        o.L_baseline = base.final_score().L;
        o.relative_improvement = o.L <= config.relative_target * o.L_baseline;
        o.absolute_target = o.L <= config.epsilon2_target &&
                            o.L_outside_recurrent <= config.epsilon2_target;
        return o;
      });
  return report;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "run_id,replication,t,L,mse,rho_changes,singleton_coverage\n";
  for (const RunRecord& run : runs) {
    for (const ScorePoint& p : run.series) {
      out << run.config.run_id << ',' << run.replication << ',' << p.t << ','
          << format_double(p.L) << ','
          << (p.mse.has_value() ? format_double(*p.mse) : std::string()) << ','
          << p.rho_changes << ',' << format_double(p.singleton_coverage) << '\n';
    }
  }
}

std::vector<RunCsvRow> read_runs_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "run_id,replication,t,L,mse,rho_changes,singleton_coverage") {
    throw InvalidArgument("read_runs_csv: unexpected header");
  }
  std::vector<RunCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream fields_in(line);
    std::string col;
    while (std::getline(fields_in, col, ',')) cols.push_back(col);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    if (cols.size() != 7) throw InvalidArgument("read_runs_csv: expected 7 columns");
    try {
      RunCsvRow row;
      row.run_id = cols[0];
      row.replication = parse_integer<std::size_t>("replication", cols[1]);
      row.t = parse_integer<std::uint64_t>("t", cols[2]);
      row.L = parse_real("L", cols[3]);
      if (!cols[4].empty()) row.mse = parse_real("mse", cols[4]);
      row.rho_changes = parse_integer<std::size_t>("rho_changes", cols[5]);
      row.singleton_coverage = parse_real("singleton_coverage", cols[6]);
      rows.push_back(std::move(row));
    } catch (const ConfigError& e) {
      throw InvalidArgument(std::string("read_runs_csv: ") + e.what());
    }
  }
  return rows;
}

void write_cycle_csv(std::ostream& out, const std::vector<CycleStats>& rows) {
  out << "S,trials,mean_c1,var_c1,mean_c,var_c,ci_low,ci_high,"
         "predicted_mean_c1,predicted_var_c1,lemma1_bound\n";
  for (const CycleStats& r : rows) {
    out << r.states << ',' << r.trials << ',' << format_double(r.mean_c1) << ','
        << format_double(r.var_c1) << ',' << format_double(r.mean_c) << ','
        << format_double(r.var_c) << ',' << format_double(r.ci_low) << ','
        << format_double(r.ci_high) << ',' << format_double(r.predicted_mean_c1)
        << ',' << format_double(r.predicted_var_c1) << ','
        << format_double(r.lemma1_bound) << '\n';
  }
}

nlohmann::json run_summary_json(const RunRecord& run) {
  nlohmann::json doc;
  doc["replication"] = run.replication;
  doc["instance_seed"] = run.instance_seed;
  doc["X"] = run.cells;
  doc["C"] = run.recurrent_states;
  doc["C1"] = run.first_cycle;
  doc["cycles"] = run.cycle_count;
  doc["singleton_coverage"] = run.singleton_coverage;
  doc["rho_changes"] = run.rho_changes;
  doc["rho_change_times"] = run.rho_change_times;
  doc["final_rho"] = run.final_rho;
  if (!run.series.empty()) {
    const ScorePoint& last = run.final_score();
    doc["final_L"] = last.L;
    doc["final_L_outside_recurrent"] = last.L_outside_recurrent;
    doc["final_mse"] = last.mse.has_value() ? nlohmann::json(*last.mse)
                                            : nlohmann::json(nullptr);
  }
  doc["wall_clock_seconds"] = run.wall_clock_seconds;
  return doc;
}

nlohmann::json theorem_report_json(const TheoremReport& report) {
  nlohmann::json doc;
  doc["passes"] = report.passes();
  doc["required_passes"] = report.required_passes;
  doc["passed"] = report.passed();
  nlohmann::json outcomes = nlohmann::json::array();
  for (const TheoremOutcome& o : report.outcomes) {
    outcomes.push_back({
        {"replication", o.replication},
        {"C", o.recurrent_states},
        {"X", o.cells},
        {"all_recurrent_singleton", o.all_recurrent_singleton},
        {"rho_stable_final_third", o.rho_stable_final_third},
        {"relative_improvement", o.relative_improvement},
        {"absolute_target", o.absolute_target},
        {"L", o.L},
        {"L_outside_recurrent", o.L_outside_recurrent},
        {"L_baseline", o.L_baseline},
        {"singleton_coverage", o.singleton_coverage},
        {"last_rho_change", o.last_rho_change.has_value()
                                ? nlohmann::json(*o.last_rho_change)
                                : nlohmann::json(nullptr)},
        {"passed", o.passed()},
    });
  }
  doc["outcomes"] = std::move(outcomes);
  return doc;
}

}  // namespace pasa
