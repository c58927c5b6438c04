#include "pasa/partition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "pasa/errors.hpp"

namespace pasa {

CellMap::CellMap(std::size_t states, std::size_t base_cells,
                 std::vector<Interval> leaves)
    : states_(states), base_cells_(base_cells), leaves_(std::move(leaves)) {
  order_.resize(leaves_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  std::sort(order_.begin(), order_.end(), [this](std::uint32_t a, std::uint32_t b) {
    return leaves_[a].lo < leaves_[b].lo;
  });
  starts_.reserve(leaves_.size());
  std::size_t expect = 0;
  for (std::uint32_t c : order_) {
    if (leaves_[c].lo != expect || leaves_[c].size() == 0) {
      throw InvalidArgument("CellMap: leaves must tile [0, states) without gaps");
    }
    starts_.push_back(leaves_[c].lo);
    expect = leaves_[c].hi;
  }
  if (expect != states_) {
    throw InvalidArgument("CellMap: leaves must cover every state");
  }
}

std::size_t CellMap::cell_of(std::size_t state) const {
  if (state >= states_) throw IndexError("state index out of range");
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), state);
  return order_[static_cast<std::size_t>(it - starts_.begin()) - 1];
}

std::size_t CellMap::memory_entries() const noexcept {
  return 2 * leaves_.size() + starts_.size() + order_.size();
}

PartitionTree::PartitionTree(std::size_t states, std::size_t base_cells,
                             std::size_t cells, int)
    : states_(states), base_cells_(base_cells), cells_(cells) {
  if (!(1 <= base_cells && base_cells <= cells && cells <= states)) {
    throw InvalidArgument("PartitionTree: require 1 <= B <= X <= S (S=" +
                          std::to_string(states) + ", B=" +
                          std::to_string(base_cells) + ", X=" +
                          std::to_string(cells) + ")");
  }
  if (states >= kLeaf) throw InvalidArgument("PartitionTree: too many states");

  nodes_.reserve(2 * cells - base_cells);
  cell_node_.assign(cells, kLeaf);
  parents_.reserve(cells - base_cells);
  rho_.assign(cells - base_cells, 0);

  const std::size_t q = states / base_cells;
  const std::size_t r = states % base_cells;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < base_cells; ++i) {
    const std::size_t size = i < r ? q + 1 : q;
    nodes_.push_back({static_cast<std::uint32_t>(lo),
                      static_cast<std::uint32_t>(lo + size),
                      static_cast<std::uint32_t>(i), kLeaf});
    cell_node_[i] = static_cast<std::uint32_t>(i);
    lo += size;
  }
}

PartitionTree::PartitionTree(std::size_t states, std::size_t base_cells,
                             std::size_t cells)
    : PartitionTree(states, base_cells, cells, 0) {
  // Largest cell first, lowest index on ties.
  using Entry = std::pair<std::size_t, std::size_t>;  // (size, cell)
  auto lower_priority = [](const Entry& a, const Entry& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> heap(
      lower_priority);
  for (std::size_t i = 0; i < base_cells_; ++i) heap.emplace(extent(i).size(), i);
  for (std::size_t level = 0; level < levels(); ++level) {
    const std::size_t best = heap.top().second;
    heap.pop();
    split(level, best);
    heap.emplace(extent(best).size(), best);
    heap.emplace(extent(base_cells_ + level).size(), base_cells_ + level);
  }
}

PartitionTree PartitionTree::from_rho(std::size_t states,
                                      std::size_t base_cells,
                                      std::size_t cells,
                                      std::span<const std::size_t> rho) {
  PartitionTree tree(states, base_cells, cells, 0);
  if (rho.size() != tree.levels()) {
    throw InvalidArgument("PartitionTree::from_rho: rho must have X - B entries");
  }
  for (std::size_t level = 0; level < rho.size(); ++level) {
    tree.split(level, rho[level]);
  }
  return tree;
}

void PartitionTree::truncate(std::size_t level) {
  while (parents_.size() > level) {
    const std::size_t k = parents_.size() - 1;
    const std::uint32_t parent = parents_.back();
    parents_.pop_back();
    cell_node_[rho_[k]] = parent;
    cell_node_[base_cells_ + k] = kLeaf;
    nodes_[parent].lower = kLeaf;
    // Children of the most recent split are always the last two nodes.
    nodes_.pop_back();
    nodes_.pop_back();
  }
}

void PartitionTree::split(std::size_t level, std::size_t target) {
  if (level != applied_levels() || level >= levels()) {
    throw PreconditionError("PartitionTree::split: level " +
                            std::to_string(level) + " applied out of order");
  }
  if (target >= live_cells()) {
    throw IndexError("PartitionTree::split: target cell " +
                     std::to_string(target) + " does not exist at level " +
                     std::to_string(level));
  }
  const std::uint32_t parent = cell_node_[target];
  const Node node = nodes_[parent];
  const std::uint32_t size = node.hi - node.lo;
  if (size <= 1) {
    throw PreconditionError("PartitionTree::split: cell " +
                            std::to_string(target) + " is a singleton");
  }
  const std::uint32_t mid = node.lo + (size + 1) / 2;
  const auto lower = static_cast<std::uint32_t>(nodes_.size());
  const auto fresh = static_cast<std::uint32_t>(base_cells_ + level);
  nodes_.push_back({node.lo, mid, static_cast<std::uint32_t>(target), kLeaf});
  nodes_.push_back({mid, node.hi, fresh, kLeaf});
  nodes_[parent].lower = lower;
  cell_node_[target] = lower;
  cell_node_[fresh] = lower + 1;
  parents_.push_back(parent);
  rho_[level] = target;
}

Interval PartitionTree::extent(std::size_t cell) const {
  if (cell >= live_cells()) throw IndexError("cell index out of range");
  const Node& n = nodes_[cell_node_[cell]];
  return {n.lo, n.hi};
}

std::uint32_t PartitionTree::created_node(std::size_t cell) const {
  if (cell < base_cells_) return static_cast<std::uint32_t>(cell);
  return nodes_[parents_[cell - base_cells_]].lower + 1;
}

Interval PartitionTree::created_extent(std::size_t cell) const {
  if (cell >= live_cells()) throw IndexError("cell index out of range");
  const Node& n = nodes_[created_node(cell)];
  return {n.lo, n.hi};
}

std::vector<bool> PartitionTree::singleton_mask() const {
  std::vector<bool> mask(cells_, false);
  for (std::size_t i = 0; i < live_cells(); ++i) mask[i] = singleton(i);
  return mask;
}

std::size_t PartitionTree::base_cell_of(std::size_t state) const {
  const std::size_t q = states_ / base_cells_;
  const std::size_t r = states_ % base_cells_;
  const std::size_t big = r * (q + 1);
  return state < big ? state / (q + 1) : r + (state - big) / q;
}

std::size_t PartitionTree::cell_of(std::size_t state,
                                   std::size_t* hops) const {
  if (state >= states_) throw IndexError("state index out of range");
  std::uint32_t n = static_cast<std::uint32_t>(base_cell_of(state));
  std::size_t visited = 1;
  while (nodes_[n].lower != kLeaf) {
    const std::uint32_t lower = nodes_[n].lower;
    n = state < nodes_[lower].hi ? lower : lower + 1;
    ++visited;
  }
  if (hops != nullptr) *hops = visited;
  return nodes_[n].cell;
}

void PartitionTree::indicator_cells(std::size_t state,
                                    std::vector<std::size_t>& out) const {
  if (state >= states_) throw IndexError("state index out of range");
  out.clear();
  std::uint32_t n = static_cast<std::uint32_t>(base_cell_of(state));
  out.push_back(n);
  while (nodes_[n].lower != kLeaf) {
    const std::uint32_t lower = nodes_[n].lower;
    if (state < nodes_[lower].hi) {
      n = lower;
    } else {
      n = lower + 1;
      out.push_back(nodes_[n].cell);
    }
  }
}

std::vector<std::size_t> PartitionTree::indicator_cells(
    std::size_t state) const {
  std::vector<std::size_t> out;
  indicator_cells(state, out);
  return out;
}

std::vector<double> PartitionTree::uniform_visit_prior() const {
  std::vector<double> prior(cells_, 0.0);
  for (std::size_t i = 0; i < live_cells(); ++i) {
    prior[i] = static_cast<double>(created_extent(i).size()) /
               static_cast<double>(states_);
  }
  return prior;
}

std::vector<Interval> PartitionTree::leaf_intervals() const {
  std::vector<Interval> leaves;
  leaves.reserve(live_cells());
  for (std::size_t i = 0; i < live_cells(); ++i) leaves.push_back(extent(i));
  return leaves;
}

CellMap PartitionTree::convert() const {
  if (!complete()) {
    throw PreconditionError("PartitionTree::convert: not every level is applied");
  }
  return CellMap(states_, base_cells_, leaf_intervals());
}

std::size_t PartitionTree::memory_entries() const noexcept {
  return nodes_.size() * 4 + cell_node_.size() + parents_.size() + rho_.size();
}

bool operator==(const PartitionTree& a, const PartitionTree& b) {
  if (a.states_ != b.states_ || a.base_cells_ != b.base_cells_ ||
      a.cells_ != b.cells_ || a.applied_levels() != b.applied_levels()) {
    return false;
  }
  return std::equal(a.rho_.begin(),
                    a.rho_.begin() + static_cast<std::ptrdiff_t>(a.applied_levels()),
                    b.rho_.begin());
}

}  // namespace pasa
