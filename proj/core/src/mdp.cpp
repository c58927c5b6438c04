#include "pasa/mdp.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "pasa/errors.hpp"

namespace pasa {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kUniform:
      return "uniform";
    case NoiseKind::kUniformExcludingCurrent:
      return "uniform_excluding_current";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "uniform") return NoiseKind::kUniform;
  if (text == "uniform_excluding_current") {
    return NoiseKind::kUniformExcludingCurrent;
  }
  throw InvalidArgument("unknown noise kind '" + std::string(text) + "'");
}

MdpModel::MdpModel(std::size_t states, std::size_t actions,
                   std::vector<std::size_t> skeleton,
                   std::vector<double> rewards, double delta, double gamma,
                   NoiseKind noise)
    : states_(states),
      actions_(actions),
      skeleton_(std::move(skeleton)),
      rewards_(std::move(rewards)),
      delta_(delta),
      gamma_(gamma),
      noise_(noise) {
  if (states_ == 0 || actions_ == 0) {
    throw InvalidArgument("MdpModel: state and action counts must be positive");
  }
  if (skeleton_.size() != states_ * actions_ ||
      rewards_.size() != states_ * actions_) {
    throw InvalidArgument("MdpModel: tables must have states * actions entries");
  }
  for (std::size_t next : skeleton_) {
    if (next >= states_) {
      throw InvalidArgument("MdpModel: skeleton entry out of range");
    }
  }
  for (double r : rewards_) {
    if (!std::isfinite(r)) {
      throw InvalidArgument("MdpModel: rewards must be finite");
    }
  }
  if (!(delta_ >= 0.0 && delta_ <= 1.0)) {
    throw InvalidArgument("MdpModel: delta must lie in [0, 1]");
  }
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) {
    throw InvalidArgument("MdpModel: gamma must lie in [0, 1)");
  }
}

std::size_t MdpModel::index(std::size_t state, std::size_t action) const {
  if (state >= states_) throw IndexError("state index out of range");
  if (action >= actions_) throw IndexError("action index out of range");
  return state * actions_ + action;
}

double MdpModel::noise_probability(std::size_t current,
                                   std::size_t next) const {
  if (current >= states_ || next >= states_) {
    throw IndexError("state index out of range");
  }
  switch (noise_) {
    case NoiseKind::kUniform:
      return 1.0 / static_cast<double>(states_);
    case NoiseKind::kUniformExcludingCurrent:
      // A single state has nowhere else to go.
      if (states_ == 1) return 1.0;
      return next == current ? 0.0 : 1.0 / static_cast<double>(states_ - 1);
  }
  return 0.0;
}

double MdpModel::transition_probability(std::size_t state, std::size_t action,
                                        std::size_t next) const {
  const double point = successor(state, action) == next ? 1.0 : 0.0;
  return (1.0 - delta_) * point + delta_ * noise_probability(state, next);
}

std::size_t MdpModel::sample_noise(std::size_t current, Rng& rng) const {
  if (noise_ == NoiseKind::kUniformExcludingCurrent && states_ > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, states_ - 2);
    const std::size_t next = pick(rng);
    return next >= current ? next + 1 : next;
  }
  std::uniform_int_distribution<std::size_t> pick(0, states_ - 1);
  return pick(rng);
}

Policy::Policy(std::size_t actions, std::vector<std::size_t> preferred,
               double delta_pi)
    : actions_(actions), preferred_(std::move(preferred)), delta_pi_(delta_pi) {
  if (actions_ == 0 || preferred_.empty()) {
    throw InvalidArgument("Policy: state and action counts must be positive");
  }
  if (!(delta_pi_ >= 0.0 && delta_pi_ <= 1.0)) {
    throw InvalidArgument("Policy: delta_pi must lie in [0, 1]");
  }
  for (std::size_t a : preferred_) {
    if (a >= actions_) throw InvalidArgument("Policy: preferred action out of range");
  }
  if (actions_ == 1) delta_pi_ = 0.0;
}

std::size_t Policy::preferred(std::size_t state) const {
  if (state >= preferred_.size()) throw IndexError("state index out of range");
  return preferred_[state];
}

double Policy::probability(std::size_t state, std::size_t action) const {
  if (action >= actions_) throw IndexError("action index out of range");
  if (action == preferred(state)) return 1.0 - delta_pi_;
  return delta_pi_ / static_cast<double>(actions_ - 1);
}

std::size_t Policy::sample(std::size_t state, Rng& rng) const {
  const std::size_t best = preferred(state);
  if (delta_pi_ == 0.0) return best;
  std::bernoulli_distribution deviate(delta_pi_);
  if (!deviate(rng)) return best;
  std::uniform_int_distribution<std::size_t> pick(0, actions_ - 2);
  const std::size_t other = pick(rng);
  return other >= best ? other + 1 : other;
}

void sample_skeleton_into(std::size_t states, std::size_t actions, Rng& rng,
                          std::vector<std::size_t>& out) {
  if (states == 0 || actions == 0) {
    throw InvalidArgument("sample_skeleton: state and action counts must be positive");
  }
  out.resize(states * actions);
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  for (auto& next : out) next = pick(rng);
}

std::vector<std::size_t> sample_skeleton(std::size_t states,
                                         std::size_t actions,
                                         std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<std::size_t> table;
  sample_skeleton_into(states, actions, rng, table);
  return table;
}

std::vector<double> sample_rewards(std::size_t states, std::size_t actions,
                                   std::uint64_t seed) {
  if (states == 0 || actions == 0) {
    throw InvalidArgument("sample_rewards: state and action counts must be positive");
  }
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> rewards(states * actions);
  for (auto& r : rewards) r = unit(rng);
  return rewards;
}

Policy sample_policy(std::size_t states, std::size_t actions, double delta_pi,
                     std::uint64_t seed) {
  if (states == 0 || actions == 0) {
    throw InvalidArgument("sample_policy: state and action counts must be positive");
  }
  if (!(delta_pi >= 0.0 && delta_pi <= 1.0)) {
    throw InvalidArgument("sample_policy: delta_pi must lie in [0, 1]");
  }
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, actions - 1);
  std::vector<std::size_t> preferred(states);
  for (auto& a : preferred) a = pick(rng);
  return Policy(actions, std::move(preferred), delta_pi);
}

MdpModel make_random_model(const RandomModelSpec& spec) {
  MdpModel model(
      spec.states, spec.actions,
      sample_skeleton(spec.states, spec.actions,
                      derive_seed(spec.seed, 0, Stream::kSkeleton)),
      sample_rewards(spec.states, spec.actions,
                     derive_seed(spec.seed, 0, Stream::kRewards)),
      spec.delta, spec.gamma, spec.noise);
  model.seed = spec.seed;
  return model;
}

Transition step_with_action(const MdpModel& model, std::size_t state,
                            std::size_t action, Rng& rng) {
  const double reward = model.reward(state, action);
  std::size_t next = model.successor(state, action);
  if (model.delta() > 0.0) {
    std::bernoulli_distribution perturb(model.delta());
    if (perturb(rng)) next = model.sample_noise(state, rng);
  }
  return {action, next, reward};
}

Transition step(const MdpModel& model, const Policy& policy, std::size_t state,
                Rng& rng) {
  if (state >= model.states()) throw IndexError("state index out of range");
  return step_with_action(model, state, policy.sample(state, rng), rng);
}

}  // namespace pasa
