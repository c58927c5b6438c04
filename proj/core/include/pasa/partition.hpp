#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pasa {

// Half-open interval of state indices [lo, hi).
struct Interval {
  std::size_t lo = 0;
  std::size_t hi = 0;

  std::size_t size() const noexcept { return hi - lo; }
  bool contains(std::size_t s) const noexcept { return lo <= s && s < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Flattened final mapping F: sorted leaf intervals queried by binary search.
class CellMap {
 public:
  CellMap() = default;
  CellMap(std::size_t states, std::size_t base_cells,
          std::vector<Interval> leaves);

  std::size_t states() const noexcept { return states_; }
  std::size_t base_cells() const noexcept { return base_cells_; }
  std::size_t cells() const noexcept { return leaves_.size(); }

  // O(log X).
  std::size_t cell_of(std::size_t state) const;
  // Interval owned by `cell`.
  const Interval& members(std::size_t cell) const { return leaves_.at(cell); }
  std::span<const Interval> leaves() const noexcept { return leaves_; }

  std::size_t memory_entries() const noexcept;

  friend bool operator==(const CellMap& a, const CellMap& b) {
    return a.states_ == b.states_ && a.base_cells_ == b.base_cells_ &&
           a.leaves_ == b.leaves_;
  }

 private:
  std::size_t states_ = 0;
  std::size_t base_cells_ = 0;
  std::vector<Interval> leaves_;      // indexed by cell
  std::vector<std::size_t> starts_;   // sorted leaf lower bounds
  std::vector<std::uint32_t> order_;  // cell owning starts_[i]
};

// Hierarchical interval partition of [0, S).
//
// Level 0 is B contiguous base cells (sizes ceil(S/B) first, then
// floor(S/B)). Level k + 1 is level k with cell rho[k] halved: the lower
// ceil(m/2) states keep index rho[k], the upper part becomes cell B + k.
// After all X - B levels there are X cells.
//
// Each base cell is a binary tree whose nodes are the intervals a cell has
// occupied; leaves are the current cells. Splits are recorded as a stack so
// that levels can be truncated and re-applied.
class PartitionTree {
 public:
  // Initial split vector from a uniform visit prior: every level splits the
  // largest non-singleton cell, lowest index on ties.
  // Requires 1 <= B <= X <= S; throws InvalidArgument otherwise.
  PartitionTree(std::size_t states, std::size_t base_cells, std::size_t cells);

  // Tree for an explicit split vector (X - B entries).
  static PartitionTree from_rho(std::size_t states, std::size_t base_cells,
                                std::size_t cells,
                                std::span<const std::size_t> rho);

  std::size_t states() const noexcept { return states_; }
  std::size_t base_cells() const noexcept { return base_cells_; }
  std::size_t cells() const noexcept { return cells_; }
  std::size_t levels() const noexcept { return cells_ - base_cells_; }
  // Number of splits currently applied; cells() - base_cells() when complete.
  std::size_t applied_levels() const noexcept { return parents_.size(); }
  bool complete() const noexcept { return applied_levels() == levels(); }
  // Cells present at the current level: base_cells() + applied_levels().
  std::size_t live_cells() const noexcept {
    return base_cells_ + applied_levels();
  }

  // Split vector; entries at or beyond applied_levels() are stale.
  std::span<const std::size_t> rho() const noexcept { return rho_; }

  // Removes every split at level >= `level`.
  void truncate(std::size_t level);

  // Applies the split for level `level` (== applied_levels()) to `target`.
  // Throws PreconditionError when the level is out of order or the target
  // cell is a singleton, IndexError when target >= live_cells().
  void split(std::size_t level, std::size_t target);

  // Current extent of a live cell.
  Interval extent(std::size_t cell) const;
  // Extent the cell had at the level it was created (level 0 for base
  // cells). This is the set behind the cell's frequency indicator.
  Interval created_extent(std::size_t cell) const;
  bool singleton(std::size_t cell) const { return extent(cell).size() <= 1; }
  // |extent| <= 1 for live cells, false for cells not yet created.
  std::vector<bool> singleton_mask() const;

  // Leaf cell containing `state`, by walking the tree from its base cell.
  // `hops`, if given, receives the number of nodes visited.
  std::size_t cell_of(std::size_t state, std::size_t* hops = nullptr) const;

  // Indices i whose indicator is 1 for `state`: the base cell containing the
  // state plus every cell B + k whose created extent contains it. Written to
  // `out` in increasing order.
  void indicator_cells(std::size_t state, std::vector<std::size_t>& out) const;
  std::vector<std::size_t> indicator_cells(std::size_t state) const;

  // Created-extent size / S per cell: the indicator means under uniform
  // visits.
  std::vector<double> uniform_visit_prior() const;

  // Requires complete().
  CellMap convert() const;
  std::vector<Interval> leaf_intervals() const;

  std::size_t memory_entries() const noexcept;

  friend bool operator==(const PartitionTree& a, const PartitionTree& b);

 private:
  struct Node {
    std::uint32_t lo;
    std::uint32_t hi;
    std::uint32_t cell;
    std::uint32_t lower;  // kLeaf, or lower child; upper child is lower + 1
  };
  static constexpr std::uint32_t kLeaf = 0xffffffffu;

  PartitionTree(std::size_t states, std::size_t base_cells, std::size_t cells,
                int /*no_initial_splits*/);

  std::size_t base_cell_of(std::size_t state) const;
  std::uint32_t created_node(std::size_t cell) const;

  std::size_t states_;
  std::size_t base_cells_;
  std::size_t cells_;
  std::vector<Node> nodes_;              // roots are nodes [0, B)
  std::vector<std::uint32_t> cell_node_; // current leaf node per live cell
  std::vector<std::uint32_t> parents_;   // node split at each applied level
  std::vector<std::size_t> rho_;
};

}  // namespace pasa
