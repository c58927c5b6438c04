#include "pasa/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "pasa/errors.hpp"

namespace pasa {

namespace {

// Below this reciprocal condition number the balance system is treated as
// singular, i.e. the chain has more than one closed class.
constexpr double kSingularRcond = 1e-13;

void validate_probability_vector(std::vector<double>& psi, double tol,
                                 double residual) {
  double total = 0.0;
  for (double& p : psi) {
    if (!std::isfinite(p) || p < -tol) {
      std::ostringstream msg;
      msg << "stationary_distribution: solution has invalid entry " << p;
      throw ConvergenceError(msg.str(), residual);
    }
    p = std::max(p, 0.0);
    total += p;
  }
  for (double& p : psi) p /= total;
}

using Apply = std::function<void(std::span<const double>, std::span<double>)>;

std::vector<double> power_iterate(std::size_t states, const Apply& apply,
                                  double tol, std::size_t max_iterations) {
  std::vector<double> psi(states, 1.0 / static_cast<double>(states));
  std::vector<double> next(states);
  double residual = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    apply(psi, next);
    residual = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < states; ++i) {
      residual = std::max(residual, std::fabs(next[i] - psi[i]));
      total += next[i];
    }
    for (std::size_t i = 0; i < states; ++i) psi[i] = next[i] / total;
    if (residual <= tol) return psi;
  }
  std::ostringstream msg;
  msg << "stationary_distribution: power iteration did not converge after "
      << max_iterations << " iterations (residual " << residual << ")";
  throw ConvergenceError(msg.str(), residual);
}

}  // namespace

StateChain::StateChain(const MdpModel& model, const Policy& policy)
    : delta_(model.delta()), noise_(model.noise()) {
  if (policy.states() != model.states() ||
      policy.actions() != model.actions()) {
    throw InvalidArgument("StateChain: policy and model dimensions differ");
  }
  const std::size_t states = model.states();
  row_offsets_.reserve(states + 1);
  row_offsets_.push_back(0);
  for (std::size_t s = 0; s < states; ++s) {
    const std::size_t begin = entries_.size();
    for (std::size_t a = 0; a < model.actions(); ++a) {
      const double p = policy.probability(s, a);
      if (p == 0.0) continue;
      const std::size_t next = model.successor(s, a);
      auto it = std::find_if(entries_.begin() + static_cast<std::ptrdiff_t>(begin),
                             entries_.end(),
                             [next](const auto& e) { return e.first == next; });
      if (it == entries_.end()) {
        entries_.emplace_back(next, p);
      } else {
        it->second += p;
      }
    }
    row_offsets_.push_back(entries_.size());
  }
}

std::span<const std::pair<std::size_t, double>> StateChain::row(
    std::size_t state) const {
  if (state >= states()) throw IndexError("state index out of range");
  return {entries_.data() + row_offsets_[state],
          row_offsets_[state + 1] - row_offsets_[state]};
}

void StateChain::left_apply(std::span<const double> psi,
                            std::span<double> out) const {
  const std::size_t n = states();
  if (psi.size() != n || out.size() != n) {
    throw InvalidArgument("StateChain::left_apply: size mismatch");
  }
  double mass = 0.0;
  for (double p : psi) mass += p;
  const double keep = 1.0 - delta_;
  const double spread =
      noise_ == NoiseKind::kUniform || n == 1
          ? delta_ * mass / static_cast<double>(n)
          : delta_ * mass / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (noise_ == NoiseKind::kUniform || n == 1) {
      out[j] = n == 1 ? delta_ * psi[0] : spread;
    } else {
      // Row i spreads delta over every state but i.
      out[j] = spread - delta_ * psi[j] / static_cast<double>(n - 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      out[entries_[k].first] += keep * entries_[k].second * psi[i];
    }
  }
}

Eigen::MatrixXd StateChain::dense() const {
  const std::size_t n = states();
  Eigen::MatrixXd m(n, n);
  if (noise_ == NoiseKind::kUniform || n == 1) {
    m.setConstant(delta_ / static_cast<double>(n));
  } else {
    m.setConstant(delta_ / static_cast<double>(n - 1));
    m.diagonal().setZero();
  }
  const double keep = 1.0 - delta_;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      m(static_cast<Eigen::Index>(i),
        static_cast<Eigen::Index>(entries_[k].first)) += keep * entries_[k].second;
    }
  }
  return m;
}

Eigen::MatrixXd transition_matrix(const MdpModel& model, const Policy& policy) {
  return StateChain(model, policy).dense();
}

double stationary_residual(const Eigen::MatrixXd& matrix,
                           std::span<const double> psi) {
  const Eigen::Map<const Eigen::VectorXd> p(psi.data(),
                                            static_cast<Eigen::Index>(psi.size()));
  return (matrix.transpose() * p - p).lpNorm<Eigen::Infinity>();
}

double stationary_residual(const StateChain& chain,
                           std::span<const double> psi) {
  std::vector<double> out(psi.size());
  chain.left_apply(psi, out);
  double residual = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    residual = std::max(residual, std::fabs(out[i] - psi[i]));
  }
  return residual;
}

StationaryDistribution stationary_distribution(
    const Eigen::MatrixXd& matrix, double tol,
    const StationaryOptions& options) {
  if (!(tol > 0.0)) throw InvalidArgument("stationary_distribution: tol must be positive");
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw InvalidArgument("stationary_distribution: matrix must be square and nonempty");
  }
  const auto n = static_cast<std::size_t>(matrix.rows());
  StationaryDistribution result;

  if (n <= options.direct_solve_max_states) {
    // (M^T - I) psi = 0 with the last balance equation replaced by sum = 1.
    Eigen::MatrixXd system = matrix.transpose();
    system.diagonal().array() -= 1.0;
    system.row(matrix.rows() - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(matrix.rows());
    rhs(matrix.rows() - 1) = 1.0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double rcond = lu.rcond();
    if (!(rcond > kSingularRcond)) {
      throw ConvergenceError(
          "stationary_distribution: balance equations are singular; the chain "
          "has no unique stationary distribution",
          std::numeric_limits<double>::infinity());
    }
    const Eigen::VectorXd solution = lu.solve(rhs);
    result.psi.assign(solution.data(), solution.data() + solution.size());
  } else {
    result.psi = power_iterate(
        n,
        [&matrix](std::span<const double> psi, std::span<double> out) {
          const Eigen::Map<const Eigen::VectorXd> p(
              psi.data(), static_cast<Eigen::Index>(psi.size()));
          Eigen::Map<Eigen::VectorXd>(out.data(),
                                      static_cast<Eigen::Index>(out.size())) =
              matrix.transpose() * p;
        },
        tol, options.max_iterations);
  }

  const double before = stationary_residual(matrix, result.psi);
  validate_probability_vector(result.psi, tol, before);
  const double residual = stationary_residual(matrix, result.psi);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "stationary_distribution: residual " << residual
        << " exceeds tolerance " << tol;
    throw ConvergenceError(msg.str(), residual);
  }
  return result;
}

StationaryDistribution stationary_distribution(
    const StateChain& chain, double tol, const StationaryOptions& options) {
  if (chain.states() <= options.direct_solve_max_states) {
    return stationary_distribution(chain.dense(), tol, options);
  }
  if (!(tol > 0.0)) throw InvalidArgument("stationary_distribution: tol must be positive");
  StationaryDistribution result;
  result.psi = power_iterate(
      chain.states(),
      [&chain](std::span<const double> psi, std::span<double> out) {
        chain.left_apply(psi, out);
      },
      tol, options.max_iterations);
  const double before = stationary_residual(chain, result.psi);
  validate_probability_vector(result.psi, tol, before);
  const double residual = stationary_residual(chain, result.psi);
  if (!(residual <= tol)) {
    std::ostringstream msg;
    msg << "stationary_distribution: residual " << residual
        << " exceeds tolerance " << tol;
    throw ConvergenceError(msg.str(), residual);
  }
  return result;
}

}  // namespace pasa
