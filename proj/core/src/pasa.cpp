#include "pasa/pasa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include <nlohmann/json.hpp>

#include "pasa/errors.hpp"

namespace pasa {

void PasaConfig::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw InvalidArgument("PasaConfig: eta must lie in (0, 1]");
  }
  if (!(threshold > 0.0)) {
    throw InvalidArgument("PasaConfig: threshold must be positive");
  }
}

std::size_t PasaConfig::interval(std::size_t cells) const {
  return nu != 0 ? nu : std::max<std::size_t>(1000, 10 * cells);
}

VisitEstimator::VisitEstimator(std::vector<double> initial, double eta)
    : values_(std::move(initial)), stamps_(values_.size(), 0), eta_(eta) {
  if (!(eta_ > 0.0 && eta_ <= 1.0)) {
    throw InvalidArgument("VisitEstimator: eta must lie in (0, 1]");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument("VisitEstimator: initial values must lie in [0, 1]");
    }
  }
}

double VisitEstimator::decay(std::uint64_t steps) const {
  if (steps == 0) return 1.0;
  return std::pow(1.0 - eta_, static_cast<double>(steps));
}

void VisitEstimator::observe(std::span<const std::size_t> indicated) {
  for (std::size_t i : indicated) {
    if (i >= values_.size()) throw IndexError("cell index out of range");
    const double current = values_[i] * decay(count_ - stamps_[i]);
    // Decay for this observation, then the indicator contribution.
    values_[i] = current + eta_ * (1.0 - current);
    stamps_[i] = count_ + 1;
  }
  ++count_;
}

double VisitEstimator::value(std::size_t cell) const {
  if (cell >= values_.size()) throw IndexError("cell index out of range");
  return values_[cell] * decay(count_ - stamps_[cell]);
}

std::vector<double> VisitEstimator::values() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(i);
  return out;
}

ReselectResult reselect(std::span<const double> u_bar, PartitionTree& tree,
                        double threshold, ReselectTrace* trace) {
  if (!tree.complete()) {
    throw PreconditionError("reselect: partition tree is not complete");
  }
  if (u_bar.size() != tree.cells()) {
    throw InvalidArgument("reselect: estimate vector must have X entries");
  }
  const std::size_t base = tree.base_cells();
  const std::vector<std::size_t> incumbent(tree.rho().begin(), tree.rho().end());
  std::vector<double> u(u_bar.begin(), u_bar.end());
  if (trace != nullptr) trace->u_after_level.clear();

  tree.truncate(0);
  // Max-heap over non-singleton live cells, highest u first and lowest index
  // on ties. An entry is stale once its cell's u has moved or the cell has
  // become a singleton; stale entries are dropped when they surface.
  struct Entry {
    double value;
    std::size_t cell;
  };
  auto lower_priority = [](const Entry& a, const Entry& b) {
    return a.value < b.value || (a.value == b.value && a.cell > b.cell);
  };
  std::vector<Entry> heap;
  heap.reserve(2 * tree.cells());
  auto push = [&](std::size_t cell) {
    if (tree.singleton(cell)) return;
    heap.push_back({u[cell], cell});
    std::push_heap(heap.begin(), heap.end(), lower_priority);
  };
  for (std::size_t i = 0; i < base; ++i) push(i);

  ReselectResult result;
  for (std::size_t k = 0; k < incumbent.size(); ++k) {
    while (!heap.empty() && (heap.front().value != u[heap.front().cell] ||
                             tree.singleton(heap.front().cell))) {
      std::pop_heap(heap.begin(), heap.end(), lower_priority);
      heap.pop_back();
    }
    // X <= S guarantees a non-singleton cell at every level.
    if (heap.empty()) throw PreconditionError("reselect: every cell is a singleton");
    const std::size_t best = heap.front().cell;

    std::size_t target = incumbent[k];
    const bool incumbent_singleton = tree.singleton(target);
    const double incumbent_score = incumbent_singleton ? 0.0 : u[target];
    if (u[best] - threshold > incumbent_score) target = best;
    // A singleton incumbent that survived the comparison (every challenger
    // within the threshold of zero) cannot be split; take the argmax.
    if (tree.singleton(target)) target = best;

    u[target] -= u[base + k];
    tree.split(k, target);
    push(target);
    push(base + k);
    if (target != incumbent[k]) ++result.rho_changes;
    if (trace != nullptr) trace->u_after_level.push_back(u);
  }
  return result;
}

Pasa::Pasa(PartitionTree tree, const PasaConfig& config)
    : tree_(std::move(tree)),
      config_(config),
      interval_(config.interval(tree_.cells())),
      estimator_(tree_.uniform_visit_prior(), config.eta) {
  config_.validate();
  map_ = tree_.convert();
}

void Pasa::observe(std::size_t state) {
  tree_.indicator_cells(state, indicated_);
  estimator_.observe(indicated_);
}

TickResult Pasa::reselect_now() {
  TickResult result;
  result.reselected = true;
  const std::vector<double> u = estimator_.values();
  result.rho_changes = reselect(u, tree_, config_.threshold).rho_changes;
  CellMap updated = tree_.convert();
  if (!(updated == map_)) {
    result.map_changed = true;
    result.previous_map = std::exchange(map_, std::move(updated));
  }

  if (trace_ != nullptr) {
    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t top = std::min<std::size_t>(5, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top),
                      order.end(), [&u](std::size_t a, std::size_t b) {
                        return u[a] > u[b] || (u[a] == u[b] && a < b);
                      });
    nlohmann::json record;
    record["t"] = last_t_;
    record["rho"] = std::vector<std::size_t>(tree_.rho().begin(), tree_.rho().end());
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t i = 0; i < top; ++i) {
      cells.push_back({{"cell", order[i]}, {"u", u[order[i]]}});
    }
    record["top"] = std::move(cells);
    record["rho_changes"] = result.rho_changes;
    *trace_ << record.dump() << '\n';
  }
  return result;
}

TickResult Pasa::tick(std::uint64_t t, std::size_t state) {
  observe(state);
  last_t_ = t;
  if (t % interval_ != 0) return {};
  return reselect_now();
}

std::size_t Pasa::memory_entries() const noexcept {
  // Reselection scratch: the copy of u and a heap of at most 2 X
  // (value, cell) pairs.
  const std::size_t scratch = 5 * tree_.cells();
  return tree_.memory_entries() + estimator_.memory_entries() +
         map_.memory_entries() + scratch + indicated_.capacity();
}

}  // namespace pasa
