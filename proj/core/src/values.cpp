#include "pasa/values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "pasa/errors.hpp"
#include "pasa/markov.hpp"

namespace pasa {

namespace {

// Mean of v under noise(. | state).
double noise_mean(const MdpModel& model, std::span<const double> v,
                  double total, std::size_t state) {
  const std::size_t n = model.states();
  if (model.noise() == NoiseKind::kUniform || n == 1) {
    return total / static_cast<double>(n);
  }
  return (total - v[state]) / static_cast<double>(n - 1);
}

// Q from V by one application of the Bellman operator.
ActionValues action_values_from_state_values(const MdpModel& model,
                                             std::span<const double> v) {
  double total = 0.0;
  for (double x : v) total += x;
  ActionValues q(model.states(), model.actions());
  const double gamma = model.gamma();
  const double delta = model.delta();
  for (std::size_t s = 0; s < model.states(); ++s) {
    const double spread = noise_mean(model, v, total, s);
    for (std::size_t a = 0; a < model.actions(); ++a) {
      q(s, a) = model.reward(s, a) +
                gamma * ((1.0 - delta) * v[model.successor(s, a)] +
                         delta * spread);
    }
  }
  return q;
}

double structured_residual(const MdpModel& model, const Policy& policy,
                           const ActionValues& q) {
  std::vector<double> v(model.states(), 0.0);
  for (std::size_t s = 0; s < model.states(); ++s) {
    for (std::size_t a = 0; a < model.actions(); ++a) {
      v[s] += policy.probability(s, a) * q(s, a);
    }
  }
  const ActionValues target = action_values_from_state_values(model, v);
  double residual = 0.0;
  for (std::size_t i = 0; i < q.data().size(); ++i) {
    residual = std::max(residual, std::fabs(target.data()[i] - q.data()[i]));
  }
  return residual;
}

}  // namespace

double ActionValues::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::fabs(x));
  return m;
}

ActionValues exact_action_values(const MdpModel& model, const Policy& policy,
                                 double tol,
                                 const ExactSolveOptions& options) {
  const std::size_t n = model.states();
  if (n * model.actions() > options.max_unknowns) {
    std::ostringstream msg;
    msg << "exact_action_values: " << n * model.actions()
        << " unknowns exceed the exact-solve cap of " << options.max_unknowns
        << "; use sampled evaluation instead";
    throw CapacityError(msg.str());
  }
  if (policy.states() != n || policy.actions() != model.actions()) {
    throw InvalidArgument("exact_action_values: policy and model dimensions differ");
  }

  const StateChain chain(model, policy);
  const double gamma = model.gamma();
  const double delta = model.delta();
  const bool uniform = model.noise() == NoiseKind::kUniform || n == 1;
  // I - gamma M = K - c 1 1^T, with K sparse.
  const double c = uniform ? gamma * delta / static_cast<double>(n)
                           : gamma * delta / static_cast<double>(n - 1);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n * (model.actions() + 1));
  for (std::size_t s = 0; s < n; ++s) {
    const auto row = static_cast<int>(s);
    triplets.emplace_back(row, row, uniform ? 1.0 : 1.0 + c);
    for (const auto& [next, p] : chain.row(s)) {
      triplets.emplace_back(row, static_cast<int>(next),
                            -gamma * (1.0 - delta) * p);
    }
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::SparseMatrix<double> k(dim, dim);
  k.setFromTriplets(triplets.begin(), triplets.end());
  k.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(k);
  if (lu.info() != Eigen::Success) {
    throw ConvergenceError("exact_action_values: sparse factorization failed",
                           std::numeric_limits<double>::infinity());
  }

  Eigen::VectorXd b(dim);
  for (std::size_t s = 0; s < n; ++s) {
    double mean_reward = 0.0;
    for (std::size_t a = 0; a < model.actions(); ++a) {
      mean_reward += policy.probability(s, a) * model.reward(s, a);
    }
    b(static_cast<Eigen::Index>(s)) = mean_reward;
  }
  const Eigen::VectorXd y = lu.solve(b);
  const Eigen::VectorXd z = lu.solve(Eigen::VectorXd::Ones(dim));
  const double denom = 1.0 - c * z.sum();
  const Eigen::VectorXd v = y + z * (c * y.sum() / denom);

  ActionValues q = action_values_from_state_values(
      model, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
  const double residual = structured_residual(model, policy, q);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "exact_action_values: Bellman residual " << residual
        << " exceeds tolerance " << tol;
    throw ConvergenceError(msg.str(), residual);
  }
  return q;
}

double bellman_residual_dense(const MdpModel& model, const Policy& policy,
                              const ActionValues& q) {
  const std::size_t n = model.states();
  const std::size_t m = model.actions();
  double residual = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < m; ++a) {
      double expected = 0.0;
      for (std::size_t s2 = 0; s2 < n; ++s2) {
        const double p = model.transition_probability(s, a, s2);
        if (p == 0.0) continue;
        for (std::size_t a2 = 0; a2 < m; ++a2) {
          expected += p * policy.probability(s2, a2) * q(s2, a2);
        }
      }
      const double target = model.reward(s, a) + model.gamma() * expected;
      residual = std::max(residual, std::fabs(target - q(s, a)));
    }
  }
  return residual;
}

}  // namespace pasa
