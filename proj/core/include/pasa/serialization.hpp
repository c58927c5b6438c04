#pragma once

#include <nlohmann/json.hpp>

#include "pasa/mdp.hpp"
#include "pasa/partition.hpp"
#include "pasa/sarsa.hpp"

namespace pasa {

// {"S", "A", "delta", "gamma", "noise", "skeleton", "preferred", "delta_pi",
//  "rewards", "seed"}; tables row-major, indices 0-based.
nlohmann::json model_to_json(const MdpModel& model, const Policy& policy);
std::pair<MdpModel, Policy> model_from_json(const nlohmann::json& doc);

// {"S", "B", "X", "rho", "leaves": [[lo, hi], ...]} with leaves in cell order.
nlohmann::json tree_to_json(const PartitionTree& tree);
// Rebuilds from S, B, X and rho; "leaves", when present, must agree.
PartitionTree tree_from_json(const nlohmann::json& doc);

// {"X", "A", "theta"} row-major.
nlohmann::json table_to_json(const CellValueTable& table);
CellValueTable table_from_json(const nlohmann::json& doc);

}  // namespace pasa
