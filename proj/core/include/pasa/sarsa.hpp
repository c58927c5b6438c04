#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pasa/partition.hpp"

namespace pasa {

// theta over cell-action pairs; Q_hat(s, a) = theta[cell_of(s), a].
class CellValueTable {
 public:
  CellValueTable(std::size_t cells, std::size_t actions, double fill = 0.0);

  std::size_t cells() const noexcept { return cells_; }
  std::size_t actions() const noexcept { return actions_; }

  double operator()(std::size_t cell, std::size_t action) const {
    return theta_[cell * actions_ + action];
  }
  double& operator()(std::size_t cell, std::size_t action) {
    return theta_[cell * actions_ + action];
  }
  double at(std::size_t cell, std::size_t action) const;

  std::span<const double> theta() const noexcept { return theta_; }
  std::span<double> theta() noexcept { return theta_; }

  friend bool operator==(const CellValueTable&, const CellValueTable&) = default;

 private:
  std::size_t cells_;
  std::size_t actions_;
  std::vector<double> theta_;
};

double predict(const CellValueTable& table, const CellMap& map,
               std::size_t state, std::size_t action);

struct SarsaSample {
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t next_state;
  std::size_t next_action;
};

// SARSA(0):
//   theta[c,a] += alpha * (r + gamma * theta[c',a'] - theta[c,a])
// Returns the TD error.
double td_update(CellValueTable& table, const CellMap& map,
                 const SarsaSample& sample, double alpha, double gamma);

// Re-indexes theta after the mapping changed: every new cell takes the row
// of the old cell that contained its lowest state. Throws InvalidArgument
// when S or X differ between the maps or the table does not match them.
CellValueTable handle_resplit(const CellValueTable& table,
                              const CellMap& old_map, const CellMap& new_map);

}  // namespace pasa
