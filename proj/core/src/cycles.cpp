#include "pasa/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "pasa/errors.hpp"
#include "pasa/random.hpp"

namespace pasa {

namespace {

enum Color : std::uint8_t { kUnvisited = 0, kOnPath = 1, kDone = 2 };

void check_map(std::span<const std::size_t> successor) {
  const std::size_t n = successor.size();
  for (std::size_t next : successor) {
    if (next >= n) throw InvalidArgument("successor map entry out of range");
  }
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;   // unbiased
  double m4 = 0.0;    // fourth central moment
};

Moments moments(std::span<const std::size_t> xs) {
  Moments m;
  const auto n = static_cast<double>(xs.size());
  for (std::size_t x : xs) m.mean += static_cast<double>(x);
  m.mean /= n;
  double m2 = 0.0;
  for (std::size_t x : xs) {
    const double d = static_cast<double>(x) - m.mean;
    m2 += d * d;
    m.m4 += d * d * d * d;
  }
  m.var = xs.size() > 1 ? m2 / (n - 1.0) : 0.0;
  m.m4 /= n;
  return m;
}

ConfidenceInterval mean_interval(const Moments& m, std::size_t n) {
  const double half = kZ99 * std::sqrt(m.var / static_cast<double>(n));
  return {m.mean - half, m.mean + half};
}

// Large-sample variance of the sample variance: (mu4 - s^4 (n-3)/(n-1)) / n.
ConfidenceInterval variance_interval(const Moments& m, std::size_t n) {
  const auto nn = static_cast<double>(n);
  const double v = std::max(
      0.0, (m.m4 - m.var * m.var * (nn - 3.0) / (nn - 1.0)) / nn);
  const double half = kZ99 * std::sqrt(v);
  return {m.var - half, m.var + half};
}

}  // namespace

std::span<const std::size_t> CycleDecomposition::cycle(std::size_t walk) const {
  const std::size_t begin = offsets_.at(walk);
  return {union_states_.data() + begin, offsets_.at(walk + 1) - begin};
}

std::vector<bool> CycleDecomposition::recurrent_mask() const {
  std::vector<bool> mask(states(), false);
  for (std::size_t s : union_states_) mask[s] = true;
  return mask;
}

std::size_t CycleDecomposition::cycle_count() const noexcept {
  return static_cast<std::size_t>(
      std::count(terminated_.begin(), terminated_.end(), std::uint8_t{1}));
}

CycleDecomposition compute_cycles(std::span<const std::size_t> successor) {
  check_map(successor);
  const std::size_t n = successor.size();
  CycleDecomposition out;
  out.lengths_.assign(n, 0);
  out.terminated_.assign(n, 0);
  out.offsets_.assign(n + 1, 0);

  std::vector<std::uint8_t> color(n, kUnvisited);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < n; ++start) {
    out.offsets_[start] = out.union_states_.size();
    std::size_t x = start;
    path.clear();
    while (color[x] == kUnvisited) {
      color[x] = kOnPath;
      path.push_back(x);
      x = successor[x];
    }
    if (color[x] == kOnPath) {
      std::size_t y = x;
      do {
        out.union_states_.push_back(y);
        y = successor[y];
      } while (y != x);
      out.terminated_[start] = 1;
      out.lengths_[start] = out.union_states_.size() - out.offsets_[start];
    }
    for (std::size_t p : path) color[p] = kDone;
  }
  out.offsets_[n] = out.union_states_.size();
  return out;
}

CycleTotals cycle_totals(std::span<const std::size_t> successor,
                         std::vector<std::uint8_t>& color) {
  const std::size_t n = successor.size();
  color.assign(n, kUnvisited);
  CycleTotals totals;
  // Path states are marked kOnPath while walking and promoted to kDone by
  // re-walking from the start, so no explicit path buffer is needed.
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t x = start;
    while (color[x] == kUnvisited) {
      color[x] = kOnPath;
      x = successor[x];
    }
    if (color[x] == kOnPath) {
      std::size_t length = 0;
      std::size_t y = x;
      do {
        ++length;
        y = successor[y];
      } while (y != x);
      totals.total += length;
      if (start == 0) totals.first = length;
    }
    for (std::size_t y = start; color[y] == kOnPath; y = successor[y]) {
      color[y] = kDone;
    }
  }
  return totals;
}

std::vector<std::size_t> successor_map(const MdpModel& model,
                                       const Policy& policy) {
  if (policy.states() != model.states()) {
    throw InvalidArgument("successor_map: policy and model dimensions differ");
  }
  std::vector<std::size_t> map(model.states());
  for (std::size_t s = 0; s < model.states(); ++s) {
    map[s] = model.successor(s, policy.preferred(s));
  }
  return map;
}

double predicted_c1_mean(std::size_t states) {
  return std::sqrt(std::numbers::pi * static_cast<double>(states) / 8.0);
}

double predicted_c1_variance(std::size_t states) {
  return (32.0 - 8.0 * std::numbers::pi) * static_cast<double>(states) / 24.0;
}

double lemma1_mean_bound(std::size_t states) {
  if (states == 0) return 0.0;
  return predicted_c1_mean(states) *
         (std::log(static_cast<double>(states)) + 1.0);
}

CycleStats monte_carlo_cycle_stats(std::size_t states, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
  if (states == 0) throw InvalidArgument("monte_carlo_cycle_stats: states must be positive");
  if (trials < 2) throw InvalidArgument("monte_carlo_cycle_stats: need at least 2 trials");

  std::vector<std::size_t> first(trials);
  std::vector<std::size_t> total(trials);
  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> map;
    std::vector<std::uint8_t> color;
    for (std::size_t k = begin; k < end; ++k) {
      Rng rng = make_rng(derive_seed(seed, k, Stream::kCycleTrial));
      sample_skeleton_into(states, 1, rng, map);
      const CycleTotals t = cycle_totals(map, color);
      first[k] = t.first;
      total[k] = t.total;
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(threads == 0 ? std::thread::hardware_concurrency()
                                           : threads,
                              1, trials);
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (trials + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(trials, begin + chunk);
      if (begin < end) pool.emplace_back(run, begin, end);
    }
  }

  const Moments c1 = moments(first);
  const Moments c = moments(total);
  CycleStats stats;
  stats.states = states;
  stats.trials = trials;
  stats.mean_c1 = c1.mean;
  stats.var_c1 = c1.var;
  stats.mean_c = c.mean;
  stats.var_c = c.var;
  const ConfidenceInterval ci = mean_interval(c1, trials);
  stats.ci_low = ci.low;
  stats.ci_high = ci.high;
  stats.var_c1_ci = variance_interval(c1, trials);
  stats.mean_c_ci = mean_interval(c, trials);
  stats.predicted_mean_c1 = predicted_c1_mean(states);
  stats.predicted_var_c1 = predicted_c1_variance(states);
  stats.lemma1_bound = lemma1_mean_bound(states);
  if (states >= 2) {
    const auto s = static_cast<double>(states);
    stats.var_c_ratio = c.var / (s * std::log(s));
  }
  return stats;
}

}  // namespace pasa
