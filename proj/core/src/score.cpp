#include "pasa/score.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "pasa/errors.hpp"
#include "pasa/numeric.hpp"
#include "pasa/random.hpp"

namespace pasa {

namespace {

void check_dimensions(const CellValueTable& table, const CellMap& map,
                      const MdpModel& model, const Policy& policy,
                      std::span<const double> psi) {
  if (map.states() != model.states() || psi.size() != model.states() ||
      policy.states() != model.states()) {
    throw InvalidArgument("score: state counts differ");
  }
  if (table.cells() != map.cells() || table.actions() != model.actions() ||
      policy.actions() != model.actions()) {
    throw InvalidArgument("score: cell or action counts differ");
  }
}

// Squared Bellman residuals summed over actions, for one state at a time.
class ResidualEvaluator {
 public:
  ResidualEvaluator(const CellValueTable& table, const CellMap& map,
                    const MdpModel& model, const Policy& policy)
      : table_(table), model_(model), cell_(model.states()),
        value_(model.states()) {
    CompensatedSum total;
    for (std::size_t s = 0; s < model.states(); ++s) {
      cell_[s] = map.cell_of(s);
      double v = 0.0;
      for (std::size_t a = 0; a < model.actions(); ++a) {
        v += policy.probability(s, a) * table(cell_[s], a);
      }
      value_[s] = v;
      total += v;
    }
    total_ = total.value();
  }

  double state_term(std::size_t s) const {
    const std::size_t n = model_.states();
    const double spread =
        model_.noise() == NoiseKind::kUniform || n == 1
            ? total_ / static_cast<double>(n)
            : (total_ - value_[s]) / static_cast<double>(n - 1);
    const double gamma = model_.gamma();
    const double delta = model_.delta();
    CompensatedSum sum;
    for (std::size_t a = 0; a < model_.actions(); ++a) {
      const double next =
          (1.0 - delta) * value_[model_.successor(s, a)] + delta * spread;
      const double residual =
          model_.reward(s, a) + gamma * next - table_(cell_[s], a);
      sum += residual * residual;
    }
    return sum.value();
  }

 private:
  const CellValueTable& table_;
  const MdpModel& model_;
  std::vector<std::size_t> cell_;
  std::vector<double> value_;
  double total_ = 0.0;
};

}  // namespace

double bellman_score(const CellValueTable& table, const CellMap& map,
                     const MdpModel& model, const Policy& policy,
                     std::span<const double> psi,
                     const ScoreOptions& options) {
  check_dimensions(table, map, model, policy, psi);
  const ResidualEvaluator eval(table, map, model, policy);
  const std::size_t terms = model.states() * model.actions();
  if (terms <= options.max_terms) {
    CompensatedSum sum;
    for (std::size_t s = 0; s < model.states(); ++s) {
      if (psi[s] != 0.0) sum += psi[s] * eval.state_term(s);
    }
    return sum.value();
  }
  if (!options.allow_sampling) {
    std::ostringstream msg;
    msg << "bellman_score: " << terms << " terms exceed the exact cap of "
        << options.max_terms << " and sampling is disabled";
    throw CapacityError(msg.str());
  }
  Rng rng = make_rng(options.seed);
  std::discrete_distribution<std::size_t> draw(psi.begin(), psi.end());
  CompensatedSum sum;
  for (std::size_t i = 0; i < options.samples; ++i) {
    sum += eval.state_term(draw(rng));
  }
  return sum.value() / static_cast<double>(options.samples);
}

double restricted_score(const CellValueTable& table, const CellMap& map,
                        const MdpModel& model, const Policy& policy,
                        std::span<const double> psi,
                        const std::vector<bool>& subset) {
  check_dimensions(table, map, model, policy, psi);
  if (subset.size() != model.states()) {
    throw InvalidArgument("restricted_score: subset mask must have S entries");
  }
  const ResidualEvaluator eval(table, map, model, policy);
  CompensatedSum sum;
  for (std::size_t s = 0; s < model.states(); ++s) {
    if (subset[s] && psi[s] != 0.0) sum += psi[s] * eval.state_term(s);
  }
  return sum.value();
}

double mse_score(const CellValueTable& table, const CellMap& map,
                 const std::optional<ActionValues>& q_true,
                 std::span<const double> psi) {
  if (!q_true.has_value()) {
    throw PreconditionError("mse_score: true action values are unavailable");
  }
  const ActionValues& q = *q_true;
  if (q.states() != map.states() || psi.size() != map.states() ||
      q.actions() != table.actions() || table.cells() != map.cells()) {
    throw InvalidArgument("mse_score: dimensions differ");
  }
  CompensatedSum sum;
  for (std::size_t s = 0; s < q.states(); ++s) {
    if (psi[s] == 0.0) continue;
    const std::size_t cell = map.cell_of(s);
    CompensatedSum inner;
    for (std::size_t a = 0; a < q.actions(); ++a) {
      const double d = q(s, a) - table(cell, a);
      inner += d * d;
    }
    sum += psi[s] * inner.value();
  }
  return sum.value();
}

ScoreReport score(const CellValueTable& table, const CellMap& map,
                  const MdpModel& model, const Policy& policy,
                  std::span<const double> psi,
                  const std::optional<ActionValues>& q_true,
                  const std::vector<bool>& recurrent) {
  ScoreReport report;
  report.L = bellman_score(table, map, model, policy, psi);
  if (q_true.has_value()) report.mse = mse_score(table, map, q_true, psi);
  std::vector<bool> outside(recurrent.size());
  for (std::size_t s = 0; s < recurrent.size(); ++s) outside[s] = !recurrent[s];
  report.L_outside_recurrent =
      restricted_score(table, map, model, policy, psi, outside);
  // Both sums are compensated; keep the subset bound exact.
  report.L_outside_recurrent = std::min(report.L_outside_recurrent, report.L);
  report.psi_used.assign(psi.begin(), psi.end());
  return report;
}

}  // namespace pasa
