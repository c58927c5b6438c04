#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pasa/mdp.hpp"

namespace pasa {

// Walk-by-walk decomposition of a functional graph s -> successor(s).
//
// Walks start from states 0, 1, ..., S-1 in order. Each walk follows the map
// until it reaches a state already seen by any walk. If that state lies on
// the walk's own path, the loop it closes is recorded as cycle i; otherwise
// cycle i is empty. The union of all cycles is exactly the set of recurrent
// states of the map.
class CycleDecomposition {
 public:
  std::size_t states() const noexcept { return lengths_.size(); }

  // C_i: length of the cycle closed by walk i (0 if none).
  std::size_t length(std::size_t walk) const { return lengths_.at(walk); }
  // T_i: walk i terminated on its own path.
  bool terminated_on_self(std::size_t walk) const {
    return terminated_.at(walk) != 0;
  }
  // States of cycle i in traversal order starting at the re-entry state.
  std::span<const std::size_t> cycle(std::size_t walk) const;

  // C = |union of cycles|.
  std::size_t total() const noexcept { return union_states_.size(); }
  // All recurrent states, grouped by walk.
  std::span<const std::size_t> union_states() const noexcept {
    return union_states_;
  }
  // Membership mask over states for the recurrent set.
  std::vector<bool> recurrent_mask() const;
  std::size_t cycle_count() const noexcept;

  friend CycleDecomposition compute_cycles(
      std::span<const std::size_t> successor);

 private:
  std::vector<std::size_t> lengths_;
  std::vector<std::uint8_t> terminated_;
  std::vector<std::size_t> offsets_;  // walk i owns [offsets_[i], offsets_[i+1])
  std::vector<std::size_t> union_states_;
};

// O(S) three-colour walk (unvisited / on current path / finished).
// Throws InvalidArgument if an entry is out of range.
CycleDecomposition compute_cycles(std::span<const std::size_t> successor);

struct CycleTotals {
  std::size_t first = 0;  // C_1
  std::size_t total = 0;  // C
};

// Only C_1 and C, reusing `color` as scratch. Same walk order as
// compute_cycles.
CycleTotals cycle_totals(std::span<const std::size_t> successor,
                         std::vector<std::uint8_t>& color);

// s -> skeleton(s, preferred(s)).
std::vector<std::size_t> successor_map(const MdpModel& model,
                                       const Policy& policy);

// Leading-order moments of C_1 for a uniform random map on S states, and
// the resulting bound on E(C). Zero for S == 0.
double predicted_c1_mean(std::size_t states);
double predicted_c1_variance(std::size_t states);
// sqrt(pi S / 8) * (ln S + 1). Uses the leading term of E(C_1) only, so at
// very small S it can fall below the exact E(C) (at S = 1 it is ~0.63 while
// C = 1 always).
double lemma1_mean_bound(std::size_t states);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

struct CycleStats {
  std::size_t states = 0;
  std::size_t trials = 0;
  double mean_c1 = 0.0;
  double var_c1 = 0.0;
  double mean_c = 0.0;
  double var_c = 0.0;
  // 99% normal-approximation intervals.
  double ci_low = 0.0;   // mean C_1
  double ci_high = 0.0;  // mean C_1
  ConfidenceInterval var_c1_ci;
  ConfidenceInterval mean_c_ci;
  double predicted_mean_c1 = 0.0;
  double predicted_var_c1 = 0.0;
  double lemma1_bound = 0.0;
  // var_c / (S ln S); 0 when S < 2.
  double var_c_ratio = 0.0;
};

// Two-sided 99% standard normal quantile.
inline constexpr double kZ99 = 2.5758293035489004;

// Samples `trials` uniform successor maps (A = 1) on independent streams
// derived from `seed` and summarizes C_1 and C. Trial k always uses the
// same stream regardless of `threads`.
CycleStats monte_carlo_cycle_stats(std::size_t states, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

}  // namespace pasa
