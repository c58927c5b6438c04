#include "pasa/sarsa.hpp"

#include "pasa/errors.hpp"

namespace pasa {

CellValueTable::CellValueTable(std::size_t cells, std::size_t actions,
                               double fill)
    : cells_(cells), actions_(actions), theta_(cells * actions, fill) {
  if (cells == 0 || actions == 0) {
    throw InvalidArgument("CellValueTable: cell and action counts must be positive");
  }
}

double CellValueTable::at(std::size_t cell, std::size_t action) const {
  if (cell >= cells_) throw IndexError("cell index out of range");
  if (action >= actions_) throw IndexError("action index out of range");
  return (*this)(cell, action);
}

double predict(const CellValueTable& table, const CellMap& map,
               std::size_t state, std::size_t action) {
  return table.at(map.cell_of(state), action);
}

double td_update(CellValueTable& table, const CellMap& map,
                 const SarsaSample& sample, double alpha, double gamma) {
  const std::size_t cell = map.cell_of(sample.state);
  const std::size_t next_cell = map.cell_of(sample.next_state);
  const double target =
      sample.reward + gamma * table.at(next_cell, sample.next_action);
  double& value = table(cell, sample.action);
  const double error = target - table.at(cell, sample.action);
  value += alpha * error;
  return error;
}

CellValueTable handle_resplit(const CellValueTable& table,
                              const CellMap& old_map, const CellMap& new_map) {
  if (old_map.states() != new_map.states() ||
      old_map.cells() != new_map.cells() ||
      old_map.base_cells() != new_map.base_cells()) {
    throw InvalidArgument("handle_resplit: maps have different dimensions");
  }
  if (table.cells() != old_map.cells()) {
    throw InvalidArgument("handle_resplit: table does not match the old map");
  }
  CellValueTable out(table.cells(), table.actions());
  for (std::size_t cell = 0; cell < new_map.cells(); ++cell) {
    const std::size_t source = old_map.cell_of(new_map.members(cell).lo);
    for (std::size_t a = 0; a < table.actions(); ++a) {
      out(cell, a) = table(source, a);
    }
  }
  return out;
}

}  // namespace pasa
