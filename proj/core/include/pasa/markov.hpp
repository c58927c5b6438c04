#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pasa/mdp.hpp"

namespace pasa {

// State-to-state chain induced by a model and a fixed policy, kept in the
// structured form
//
//   M = (1 - delta) * D + delta * N
//
// where D has at most A nonzeros per row (policy-weighted skeleton) and N is
// the noise distribution. Applying M costs O(S * A) instead of O(S^2).
class StateChain {
 public:
  StateChain(const MdpModel& model, const Policy& policy);

  std::size_t states() const noexcept { return row_offsets_.size() - 1; }
  double delta() const noexcept { return delta_; }
  NoiseKind noise() const noexcept { return noise_; }

  // out = psi^T M. `out` must have states() entries.
  void left_apply(std::span<const double> psi, std::span<double> out) const;

  // Materialized S x S matrix.
  Eigen::MatrixXd dense() const;

  // Sparse rows of D as (next_state, probability) pairs.
  std::span<const std::pair<std::size_t, double>> row(std::size_t state) const;

 private:
  std::vector<std::size_t> row_offsets_;
  std::vector<std::pair<std::size_t, double>> entries_;
  double delta_;
  NoiseKind noise_;
};

// M[i, j] = sum_a pi(a | i) P(j | i, a). Rows sum to 1.
Eigen::MatrixXd transition_matrix(const MdpModel& model, const Policy& policy);

struct StationaryDistribution {
  std::vector<double> psi;
};

struct StationaryOptions {
  // Direct solve of the balance equations up to this many states, power
  // iteration above.
  std::size_t direct_solve_max_states = 2048;
  std::size_t max_iterations = 1'000'000;
};

// Left fixed point of a row-stochastic matrix. Throws ConvergenceError when
// the chain has no unique stationary distribution (reducible) or power
// iteration does not reach ||psi^T M - psi^T||_inf <= tol within the cap.
StationaryDistribution stationary_distribution(
    const Eigen::MatrixXd& matrix, double tol,
    const StationaryOptions& options = {});

StationaryDistribution stationary_distribution(
    const StateChain& chain, double tol, const StationaryOptions& options = {});

// ||psi^T M - psi^T||_inf.
double stationary_residual(const Eigen::MatrixXd& matrix,
                           std::span<const double> psi);
double stationary_residual(const StateChain& chain,
                           std::span<const double> psi);

}  // namespace pasa
