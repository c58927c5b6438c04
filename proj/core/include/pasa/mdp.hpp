#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pasa/random.hpp"

namespace pasa {

// Distribution used for the perturbed transition taken with probability
// delta. The deterministic part of the kernel is the skeleton.
enum class NoiseKind {
  kUniform,                // every state, including the current one
  kUniformExcludingCurrent,  // every state other than the current one
};

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view text);

// Finite MDP whose kernel is a delta-mixture of a deterministic successor
// table and a state-independent noise distribution:
//
//   P(s'|s,a) = (1 - delta) * [s' == skeleton(s,a)] + delta * noise(s'|s)
//
// Tables are row-major S x A. Immutable after construction.
class MdpModel {
 public:
  MdpModel(std::size_t states, std::size_t actions,
           std::vector<std::size_t> skeleton, std::vector<double> rewards,
           double delta, double gamma, NoiseKind noise = NoiseKind::kUniform);

  std::size_t states() const noexcept { return states_; }
  std::size_t actions() const noexcept { return actions_; }
  double delta() const noexcept { return delta_; }
  double gamma() const noexcept { return gamma_; }
  NoiseKind noise() const noexcept { return noise_; }

  std::size_t successor(std::size_t state, std::size_t action) const {
    return skeleton_[index(state, action)];
  }
  double reward(std::size_t state, std::size_t action) const {
    return rewards_[index(state, action)];
  }
  std::span<const std::size_t> skeleton() const noexcept { return skeleton_; }
  std::span<const double> rewards() const noexcept { return rewards_; }

  // noise(next | current); both indices must be valid.
  double noise_probability(std::size_t current, std::size_t next) const;

  // Full kernel entry P(next | state, action).
  double transition_probability(std::size_t state, std::size_t action,
                                std::size_t next) const;

  // Samples from noise(. | current).
  std::size_t sample_noise(std::size_t current, Rng& rng) const;

  // Seed the model was generated from, if any. Carried for provenance only.
  std::optional<std::uint64_t> seed;

 private:
  std::size_t index(std::size_t state, std::size_t action) const;

  std::size_t states_;
  std::size_t actions_;
  std::vector<std::size_t> skeleton_;
  std::vector<double> rewards_;
  double delta_;
  double gamma_;
  NoiseKind noise_;
};

// Near-deterministic fixed policy: the preferred action with probability
// 1 - delta_pi, otherwise one of the A - 1 other actions uniformly.
class Policy {
 public:
  // delta_pi is forced to 0 when actions == 1.
  Policy(std::size_t actions, std::vector<std::size_t> preferred,
         double delta_pi);

  std::size_t states() const noexcept { return preferred_.size(); }
  std::size_t actions() const noexcept { return actions_; }
  double delta_pi() const noexcept { return delta_pi_; }

  std::size_t preferred(std::size_t state) const;
  std::span<const std::size_t> preferred() const noexcept { return preferred_; }

  // pi(action | state).
  double probability(std::size_t state, std::size_t action) const;

  std::size_t sample(std::size_t state, Rng& rng) const;

 private:
  std::size_t actions_;
  std::vector<std::size_t> preferred_;
  double delta_pi_;
};

// Successor table with every entry drawn independently and uniformly from
// [0, states). Row-major states x actions.
std::vector<std::size_t> sample_skeleton(std::size_t states,
                                         std::size_t actions,
                                         std::uint64_t seed);

// Fills `out` (resized to states * actions) without reallocating when it
// already has capacity; used by the Monte Carlo cycle study.
void sample_skeleton_into(std::size_t states, std::size_t actions, Rng& rng,
                          std::vector<std::size_t>& out);

// i.i.d. uniform rewards on [0, 1].
std::vector<double> sample_rewards(std::size_t states, std::size_t actions,
                                   std::uint64_t seed);

Policy sample_policy(std::size_t states, std::size_t actions, double delta_pi,
                     std::uint64_t seed);

struct RandomModelSpec {
  std::size_t states = 0;
  std::size_t actions = 1;
  double delta = 0.0;
  double gamma = 0.9;
  NoiseKind noise = NoiseKind::kUniform;
  std::uint64_t seed = 0;
};

// Skeleton and rewards drawn from independent streams derived from
// spec.seed.
MdpModel make_random_model(const RandomModelSpec& spec);

struct Transition {
  std::size_t action;
  std::size_t next_state;
  double reward;
};

// One environment step from `state` under `policy`.
Transition step(const MdpModel& model, const Policy& policy, std::size_t state,
                Rng& rng);

// Same as step() but with the action already chosen.
Transition step_with_action(const MdpModel& model, std::size_t state,
                            std::size_t action, Rng& rng);

}  // namespace pasa
