#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pasa/partition.hpp"

namespace pasa {

struct PasaConfig {
  double eta = 0.01;        // step size of the frequency tracker, (0, 1]
  double threshold = 0.02;  // margin a challenger must exceed, > 0
  std::size_t nu = 0;       // reselection interval; 0 selects max(1000, 10 X)

  // Throws InvalidArgument for out-of-range values.
  void validate() const;
  std::size_t interval(std::size_t cells) const;
};

// Geometric moving averages of the cell indicators:
//
//   u_i <- u_i + eta * (x_i - u_i)
//
// Decay is applied lazily: each entry stores its value at the observation
// count it was last touched, so an update costs O(|indicated|).
class VisitEstimator {
 public:
  VisitEstimator(std::vector<double> initial, double eta);

  // One observation whose indicator is 1 exactly on `indicated`.
  void observe(std::span<const std::size_t> indicated);

  double value(std::size_t cell) const;
  std::vector<double> values() const;
  std::size_t size() const noexcept { return values_.size(); }
  std::uint64_t observations() const noexcept { return count_; }
  double eta() const noexcept { return eta_; }

  std::size_t memory_entries() const noexcept { return 2 * values_.size(); }

 private:
  double decay(std::uint64_t steps) const;

  std::vector<double> values_;
  std::vector<std::uint64_t> stamps_;
  std::uint64_t count_ = 0;
  double eta_;
};

// Scratch vector after each level of a reselection, for diagnostics.
struct ReselectTrace {
  std::vector<std::vector<double>> u_after_level;
};

struct ReselectResult {
  std::size_t rho_changes = 0;
};

// One pass of the split-selection sequence over levels 0 .. X-B-1, taking
// `u_bar` as the frequency estimates and tree.rho() as the incumbent split
// vector. The tree is rebuilt level by level. Requires tree.complete().
//
// At level k, over live non-singleton cells i < B + k:
//   i_max = lowest index attaining max u_i
//   rho_k <- i_max  if  u[i_max] - threshold > (singleton(rho_k) ? 0 : u[rho_k])
//   u[rho_k] -= u[B + k]
//   split rho_k
ReselectResult reselect(std::span<const double> u_bar, PartitionTree& tree,
                        double threshold, ReselectTrace* trace = nullptr);

struct TickResult {
  bool reselected = false;
  std::size_t rho_changes = 0;
  bool map_changed = false;
  // Mapping in force before the reselection; set only when map_changed.
  CellMap previous_map;
};

// Single-writer state of one PASA instance: tree, tracker and the current
// flattened mapping.
class Pasa {
 public:
  Pasa(PartitionTree tree, const PasaConfig& config);

  const PartitionTree& tree() const noexcept { return tree_; }
  const CellMap& map() const noexcept { return map_; }
  const VisitEstimator& estimator() const noexcept { return estimator_; }
  const PasaConfig& config() const noexcept { return config_; }
  std::size_t interval() const noexcept { return interval_; }

  void observe(std::size_t state);

  // Reselection using the current estimates.
  TickResult reselect_now();

  // Observe, then reselect when t % interval() == 0.
  TickResult tick(std::uint64_t t, std::size_t state);

  // JSON-lines record per reselection: {"t", "rho", "top"}. Null disables.
  void set_trace(std::ostream* out) noexcept { trace_ = out; }

  // Stored words across tree, tracker, mapping and reselection scratch.
  std::size_t memory_entries() const noexcept;

 private:
  PartitionTree tree_;
  PasaConfig config_;
  std::size_t interval_;
  VisitEstimator estimator_;
  CellMap map_;
  std::vector<std::size_t> indicated_;
  std::ostream* trace_ = nullptr;
  std::uint64_t last_t_ = 0;
};

}  // namespace pasa
