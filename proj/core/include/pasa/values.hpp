#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pasa/mdp.hpp"

namespace pasa {

// Dense S x A table of action values, row-major.
class ActionValues {
 public:
  ActionValues() = default;
  ActionValues(std::size_t states, std::size_t actions, double fill = 0.0)
      : states_(states), actions_(actions), data_(states * actions, fill) {}

  std::size_t states() const noexcept { return states_; }
  std::size_t actions() const noexcept { return actions_; }

  double operator()(std::size_t state, std::size_t action) const {
    return data_[state * actions_ + action];
  }
  double& operator()(std::size_t state, std::size_t action) {
    return data_[state * actions_ + action];
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  double max_abs() const noexcept;

 private:
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> data_;
};

struct ExactSolveOptions {
  // Largest S * A accepted by exact_action_values.
  std::size_t max_unknowns = 16384;
};

// Q^pi from the linear Bellman system
//
//   Q(s,a) = R(s,a) + gamma * sum_{s',a'} P(s'|s,a) pi(a'|s') Q(s',a').
//
// Solved through V = Pi Q, whose system (I - gamma M) V = Pi R is a sparse
// matrix plus a rank-one noise term (Sherman-Morrison over a sparse LU).
// Throws CapacityError above the cap and ConvergenceError when the pointwise
// Bellman residual exceeds tol.
ActionValues exact_action_values(const MdpModel& model, const Policy& policy,
                                 double tol,
                                 const ExactSolveOptions& options = {});

// max_{s,a} |R + gamma P Pi Q - Q|, evaluated by direct enumeration of the
// kernel rows. O(S^2 A); meant for verification at small S.
double bellman_residual_dense(const MdpModel& model, const Policy& policy,
                              const ActionValues& q);

}  // namespace pasa
