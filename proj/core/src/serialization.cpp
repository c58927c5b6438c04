#include "pasa/serialization.hpp"

#include <algorithm>

#include "pasa/errors.hpp"

namespace pasa {

nlohmann::json model_to_json(const MdpModel& model, const Policy& policy) {
  nlohmann::json doc;
  doc["S"] = model.states();
  doc["A"] = model.actions();
  doc["delta"] = model.delta();
  doc["gamma"] = model.gamma();
  doc["noise"] = std::string(to_string(model.noise()));
  doc["skeleton"] = std::vector<std::size_t>(model.skeleton().begin(),
                                             model.skeleton().end());
  doc["preferred"] = std::vector<std::size_t>(policy.preferred().begin(),
                                              policy.preferred().end());
  doc["delta_pi"] = policy.delta_pi();
  doc["rewards"] = std::vector<double>(model.rewards().begin(),
                                       model.rewards().end());
  doc["seed"] = model.seed.has_value() ? nlohmann::json(*model.seed)
                                       : nlohmann::json(nullptr);
  return doc;
}

std::pair<MdpModel, Policy> model_from_json(const nlohmann::json& doc) {
  try {
    const auto states = doc.at("S").get<std::size_t>();
    const auto actions = doc.at("A").get<std::size_t>();
    MdpModel model(states, actions,
                   doc.at("skeleton").get<std::vector<std::size_t>>(),
                   doc.at("rewards").get<std::vector<double>>(),
                   doc.at("delta").get<double>(), doc.at("gamma").get<double>(),
                   parse_noise_kind(doc.value("noise", std::string("uniform"))));
    if (doc.contains("seed") && !doc["seed"].is_null()) {
      model.seed = doc["seed"].get<std::uint64_t>();
    }
    Policy policy(actions, doc.at("preferred").get<std::vector<std::size_t>>(),
                  doc.value("delta_pi", 0.0));
    if (policy.states() != states) {
      throw InvalidArgument("model_from_json: preferred must have S entries");
    }
    return {std::move(model), std::move(policy)};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model_from_json: ") + e.what());
  }
}

nlohmann::json tree_to_json(const PartitionTree& tree) {
  nlohmann::json doc;
  doc["S"] = tree.states();
  doc["B"] = tree.base_cells();
  doc["X"] = tree.cells();
  doc["rho"] = std::vector<std::size_t>(tree.rho().begin(), tree.rho().end());
  nlohmann::json leaves = nlohmann::json::array();
  for (const Interval& leaf : tree.leaf_intervals()) {
    leaves.push_back({leaf.lo, leaf.hi});
  }
  doc["leaves"] = std::move(leaves);
  return doc;
}

PartitionTree tree_from_json(const nlohmann::json& doc) {
  try {
    const auto rho = doc.at("rho").get<std::vector<std::size_t>>();
    PartitionTree tree = PartitionTree::from_rho(
        doc.at("S").get<std::size_t>(), doc.at("B").get<std::size_t>(),
        doc.at("X").get<std::size_t>(), rho);
    if (doc.contains("leaves")) {
      const auto leaves = tree.leaf_intervals();
      const auto& stored = doc["leaves"];
      if (stored.size() != leaves.size()) {
        throw InvalidArgument("tree_from_json: leaf list does not match rho");
      }
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (stored[i].at(0).get<std::size_t>() != leaves[i].lo ||
            stored[i].at(1).get<std::size_t>() != leaves[i].hi) {
          throw InvalidArgument("tree_from_json: leaf list does not match rho");
        }
      }
    }
    return tree;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("tree_from_json: ") + e.what());
  }
}

nlohmann::json table_to_json(const CellValueTable& table) {
  return {{"X", table.cells()},
          {"A", table.actions()},
          {"theta", std::vector<double>(table.theta().begin(),
                                        table.theta().end())}};
}

CellValueTable table_from_json(const nlohmann::json& doc) {
  try {
    CellValueTable table(doc.at("X").get<std::size_t>(),
                         doc.at("A").get<std::size_t>());
    const auto theta = doc.at("theta").get<std::vector<double>>();
    if (theta.size() != table.theta().size()) {
      throw InvalidArgument("table_from_json: theta has the wrong size");
    }
    std::copy(theta.begin(), theta.end(), table.theta().begin());
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("table_from_json: ") + e.what());
  }
}

}  // namespace pasa
