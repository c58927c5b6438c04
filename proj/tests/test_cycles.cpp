#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "pasa/cycles.hpp"
#include "pasa/errors.hpp"
#include "pasa/random.hpp"

using namespace pasa;

namespace {

// The walk procedure written with an explicit path list; quadratic.
std::vector<std::size_t> naive_lengths(const std::vector<std::size_t>& f) {
  std::vector<bool> seen(f.size(), false);
  std::vector<std::size_t> lengths(f.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<std::size_t> path;
    std::size_t s = i;
    while (!seen[s]) {
      seen[s] = true;
      path.push_back(s);
      s = f[s];
    }
    const auto it = std::find(path.begin(), path.end(), s);
    if (it != path.end()) lengths[i] = static_cast<std::size_t>(path.end() - it);
  }
  return lengths;
}

std::set<std::size_t> recurrent_by_iteration(const std::vector<std::size_t>& f) {
  std::set<std::size_t> out;
  for (std::size_t s = 0; s < f.size(); ++s) {
    std::size_t x = f[s];
    for (std::size_t k = 0; k < f.size() && x != s; ++k) x = f[x];
    if (x == s) out.insert(s);
  }
  return out;
}

}  // namespace

TEST(ComputeCycles, AllSelfLoops) {
  const std::vector<std::size_t> f = {0, 1, 2, 3, 4};
  const CycleDecomposition d = compute_cycles(f);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(d.length(i), 1u);
    EXPECT_TRUE(d.terminated_on_self(i));
  }
  EXPECT_EQ(d.total(), 5u);
}

TEST(ComputeCycles, EverythingFunnelsIntoFirst) {
  const CycleDecomposition d = compute_cycles(std::vector<std::size_t>(6, 0));
  EXPECT_EQ(d.length(0), 1u);
  for (std::size_t i = 1; i < 6; ++i) {
    EXPECT_EQ(d.length(i), 0u);
    EXPECT_FALSE(d.terminated_on_self(i));
  }
  EXPECT_EQ(d.total(), 1u);
}

TEST(ComputeCycles, ManualTrace) {
  const CycleDecomposition d = compute_cycles(std::vector<std::size_t>{1, 0, 3, 1});
  EXPECT_EQ(d.length(0), 2u);
  const std::set<std::size_t> c1(d.cycle(0).begin(), d.cycle(0).end());
  EXPECT_EQ(c1, (std::set<std::size_t>{0, 1}));
  EXPECT_EQ(d.length(1), 0u);
  EXPECT_EQ(d.length(2), 0u);
  EXPECT_EQ(d.length(3), 0u);
  EXPECT_EQ(d.total(), 2u);
  EXPECT_EQ(d.cycle_count(), 1u);
}

TEST(ComputeCycles, RejectsOutOfRange) {
  EXPECT_THROW(compute_cycles(std::vector<std::size_t>{0, 2}), InvalidArgument);
}

TEST(ComputeCycles, ExhaustiveAgainstNaiveWalk) {
  for (std::size_t S = 1; S <= 5; ++S) {
    std::size_t maps = 1;
    for (std::size_t i = 0; i < S; ++i) maps *= S;
    std::vector<std::uint8_t> color;
    for (std::size_t code = 0; code < maps; ++code) {
      std::vector<std::size_t> f(S);
      std::size_t c = code;
      for (std::size_t i = 0; i < S; ++i) {
        f[i] = c % S;
        c /= S;
      }
      const CycleDecomposition d = compute_cycles(f);
      const auto ref = naive_lengths(f);
      std::size_t sum = 0;
      for (std::size_t i = 0; i < S; ++i) {
        ASSERT_EQ(d.length(i), ref[i]);
        ASSERT_EQ(d.terminated_on_self(i), ref[i] > 0);
        sum += ref[i];
      }
      ASSERT_EQ(d.total(), sum);
      const CycleTotals t = cycle_totals(f, color);
      ASSERT_EQ(t.first, ref[0]);
      ASSERT_EQ(t.total, sum);
    }
  }
}

TEST(ComputeCycles, ExpectedFirstCycleForTwoStates) {
  // Maps (f0, f1): (0,0) -> 1, (0,1) -> 1, (1,0) -> 2, (1,1) -> 1.
  double total = 0.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      total += static_cast<double>(compute_cycles(std::vector<std::size_t>{a, b}).length(0));
  EXPECT_DOUBLE_EQ(total / 4.0, 1.25);

  const CycleStats stats = monte_carlo_cycle_stats(2, 20000, 17);
  EXPECT_LE(stats.ci_low, 1.25);
  EXPECT_GE(stats.ci_high, 1.25);
}

TEST(ComputeCycles, RandomInvariants) {
  std::vector<std::uint8_t> color;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::size_t S = 1 + seed * 7 % 300;
    const std::vector<std::size_t> f = sample_skeleton(S, 1, seed);
    const CycleDecomposition d = compute_cycles(f);
    EXPECT_GE(d.length(0), 1u);
    EXPECT_GE(d.total(), 1u);
    EXPECT_LE(d.total(), S);

    std::set<std::size_t> seen;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < S; ++i) {
      sum += d.length(i);
      if (!d.terminated_on_self(i)) EXPECT_EQ(d.length(i), 0u);
      for (std::size_t s : d.cycle(i)) EXPECT_TRUE(seen.insert(s).second) << "cycles overlap";
    }
    EXPECT_EQ(sum, d.total());
    EXPECT_EQ(seen, recurrent_by_iteration(f));

    // The recurrent set does not depend on walk order: relabel the states
    // with a rotation and map back.
    const std::size_t shift = seed % S;
    std::vector<std::size_t> g(S);
    for (std::size_t s = 0; s < S; ++s) g[(s + shift) % S] = (f[s] + shift) % S;
    const CycleDecomposition dg = compute_cycles(g);
    std::set<std::size_t> rotated;
    for (std::size_t s : dg.union_states()) rotated.insert((s + S - shift) % S);
    EXPECT_EQ(rotated, seen);

    const CycleTotals t = cycle_totals(f, color);
    EXPECT_EQ(t.first, d.length(0));
    EXPECT_EQ(t.total, d.total());
    const std::vector<bool> mask = d.recurrent_mask();
    for (std::size_t s = 0; s < S; ++s) EXPECT_EQ(mask[s], seen.count(s) == 1);
  }
}

TEST(Predictions, LeadingTerms) {
  EXPECT_NEAR(predicted_c1_mean(10000), 62.6657, 1e-4);
  EXPECT_NEAR(predicted_c1_mean(8), std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_EQ(predicted_c1_mean(0), 0.0);
  EXPECT_NEAR(predicted_c1_variance(10000), 2861.4, 0.05);
  EXPECT_NEAR(predicted_c1_variance(24), 32 - 8 * std::numbers::pi, 1e-12);
  EXPECT_EQ(predicted_c1_variance(0), 0.0);
  EXPECT_NEAR(lemma1_mean_bound(4096), 373.7, 0.05);
  EXPECT_NEAR(lemma1_mean_bound(1), std::sqrt(std::numbers::pi / 8), 1e-12);
  EXPECT_NEAR(lemma1_mean_bound(1000000), 9284, 1.0);
  EXPECT_EQ(lemma1_mean_bound(0), 0.0);
}

TEST(MonteCarlo, SingleState) {
  const CycleStats s = monte_carlo_cycle_stats(1, 10, 1);
  EXPECT_EQ(s.mean_c1, 1.0);
  EXPECT_EQ(s.var_c1, 0.0);
  EXPECT_EQ(s.mean_c, 1.0);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
  const CycleStats a = monte_carlo_cycle_stats(500, 300, 9, 1);
  const CycleStats b = monte_carlo_cycle_stats(500, 300, 9, 3);
  EXPECT_EQ(a.mean_c1, b.mean_c1);
  EXPECT_EQ(a.var_c1, b.var_c1);
  EXPECT_EQ(a.mean_c, b.mean_c);
  EXPECT_EQ(a.var_c, b.var_c);
}

TEST(MonteCarlo, TwoTrialsGiveWideIntervals) {
  const CycleStats s = monte_carlo_cycle_stats(256, 2, 4);
  EXPECT_TRUE(std::isfinite(s.ci_low));
  EXPECT_LE(s.ci_low, s.mean_c1);
  EXPECT_GE(s.ci_high, s.mean_c1);
  EXPECT_THROW(monte_carlo_cycle_stats(256, 1, 4), InvalidArgument);
}

TEST(MonteCarlo, MeanMatchesExactSmallS) {
  // Exact E(C_1) for S = 5 by enumerating all 5^5 maps.
  double total = 0.0;
  for (std::size_t code = 0; code < 3125; ++code) {
    std::vector<std::size_t> f(5);
    std::size_t c = code;
    for (auto& v : f) {
      v = c % 5;
      c /= 5;
    }
    total += static_cast<double>(naive_lengths(f)[0]);
  }
  const double exact = total / 3125.0;
  const CycleStats s = monte_carlo_cycle_stats(5, 40000, 23);
  EXPECT_LE(s.ci_low, exact);
  EXPECT_GE(s.ci_high, exact);
}
