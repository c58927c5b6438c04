#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pasa/mdp.hpp"
#include "pasa/partition.hpp"
#include "pasa/sarsa.hpp"
#include "pasa/values.hpp"

namespace pasa {

struct ScoreOptions {
  // Largest S * A summed exactly.
  std::size_t max_terms = 1'000'000;
  // Beyond the cap, estimate L from `samples` states drawn from psi instead
  // of throwing CapacityError.
  bool allow_sampling = false;
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
};

// Stationary-weighted squared Bellman residual of Q_hat:
//
//   L = sum_s psi_s sum_a (R(s,a) + gamma E[V_hat(s')] - Q_hat(s,a))^2
//
// with V_hat(s') = sum_a' pi(a'|s') Q_hat(s',a'). The expectation uses the
// two-part kernel directly, so each term is O(1) after an O(S A) pass.
double bellman_score(const CellValueTable& table, const CellMap& map,
                     const MdpModel& model, const Policy& policy,
                     std::span<const double> psi,
                     const ScoreOptions& options = {});

// Outer sum restricted to states with subset[s] == true.
double restricted_score(const CellValueTable& table, const CellMap& map,
                        const MdpModel& model, const Policy& policy,
                        std::span<const double> psi,
                        const std::vector<bool>& subset);

// sum_s psi_s sum_a (Q(s,a) - Q_hat(s,a))^2. Throws PreconditionError when
// q_true is empty.
double mse_score(const CellValueTable& table, const CellMap& map,
                 const std::optional<ActionValues>& q_true,
                 std::span<const double> psi);

struct ScoreReport {
  double L = 0.0;
  std::optional<double> mse;
  double L_outside_recurrent = 0.0;
  std::vector<double> psi_used;
};

// L, MSE when q_true is present, and the part of L from states outside
// `recurrent`.
ScoreReport score(const CellValueTable& table, const CellMap& map,
                  const MdpModel& model, const Policy& policy,
                  std::span<const double> psi,
                  const std::optional<ActionValues>& q_true,
                  const std::vector<bool>& recurrent);

}  // namespace pasa
