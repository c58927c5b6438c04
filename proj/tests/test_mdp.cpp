#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pasa/errors.hpp"
#include "pasa/markov.hpp"
#include "pasa/mdp.hpp"
#include "pasa/random.hpp"

using namespace pasa;

TEST(Random, DeriveSeedSeparatesStreamsAndIndices) {
  EXPECT_EQ(derive_seed(5, 3, Stream::kPolicy), derive_seed(5, 3, Stream::kPolicy));
  EXPECT_NE(derive_seed(5, 3, Stream::kPolicy), derive_seed(5, 3, Stream::kRewards));
  EXPECT_NE(derive_seed(5, 3, Stream::kPolicy), derive_seed(5, 4, Stream::kPolicy));
  EXPECT_NE(derive_seed(5, 3, Stream::kPolicy), derive_seed(6, 3, Stream::kPolicy));
}

TEST(SampleSkeleton, SingleStateMapsToItself) {
  EXPECT_EQ(sample_skeleton(1, 1, 123), std::vector<std::size_t>{0});
}

TEST(SampleSkeleton, Deterministic) {
  EXPECT_EQ(sample_skeleton(4, 2, 7), sample_skeleton(4, 2, 7));
  EXPECT_NE(sample_skeleton(64, 2, 7), sample_skeleton(64, 2, 8));
}

TEST(SampleSkeleton, RejectsEmptyDimensions) {
  EXPECT_THROW(sample_skeleton(0, 1, 1), InvalidArgument);
  EXPECT_THROW(sample_skeleton(1, 0, 1), InvalidArgument);
}

TEST(SampleSkeleton, FirstSuccessorIsUniformChiSquare) {
  constexpr std::size_t S = 1000;
  constexpr std::size_t seeds = 100000;
  std::vector<double> counts(S, 0.0);
  for (std::size_t seed = 0; seed < seeds; ++seed) {
    counts[sample_skeleton(S, 1, seed)[0]] += 1.0;
  }
  const double expected = static_cast<double>(seeds) / S;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Upper 0.001 quantile of chi-square with S - 1 degrees of freedom,
  // Wilson-Hilferty approximation.
  const double k = S - 1;
  const double z = 3.090232306167813;
  const double critical = k * std::pow(1 - 2 / (9 * k) + z * std::sqrt(2 / (9 * k)), 3);
  EXPECT_LT(chi2, critical);
}

TEST(SamplePolicy, SingleActionIsDeterministic) {
  const Policy p = sample_policy(10, 1, 0.3, 9);
  EXPECT_EQ(p.delta_pi(), 0.0);
  for (std::size_t s = 0; s < 10; ++s) {
    EXPECT_EQ(p.preferred(s), 0u);
    EXPECT_EQ(p.probability(s, 0), 1.0);
  }
}

TEST(SamplePolicy, SplitsDeviationEvenly) {
  const Policy p = sample_policy(20, 4, 0.03, 2);
  for (std::size_t s = 0; s < 20; ++s) {
    double total = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      const double expect = a == p.preferred(s) ? 0.97 : 0.01;
      EXPECT_DOUBLE_EQ(p.probability(s, a), expect);
      total += p.probability(s, a);
    }
    EXPECT_NEAR(total, 1.0, 1e-15);
  }
}

TEST(SamplePolicy, DeterministicAndValidated) {
  const Policy a = sample_policy(100, 3, 0.1, 42);
  const Policy b = sample_policy(100, 3, 0.1, 42);
  EXPECT_TRUE(std::equal(a.preferred().begin(), a.preferred().end(), b.preferred().begin()));
  EXPECT_THROW(sample_policy(5, 2, 1.5, 1), InvalidArgument);
  EXPECT_THROW(sample_policy(5, 2, -0.1, 1), InvalidArgument);
}

TEST(MdpModel, ValidatesConstruction) {
  EXPECT_THROW(MdpModel(2, 1, {0, 2}, {0, 0}, 0.1, 0.5), InvalidArgument);
  EXPECT_THROW(MdpModel(2, 1, {0, 1}, {0, 0}, 1.1, 0.5), InvalidArgument);
  EXPECT_THROW(MdpModel(2, 1, {0, 1}, {0, 0}, 0.1, 1.0), InvalidArgument);
  EXPECT_THROW(MdpModel(2, 1, {0, 1}, {0, NAN}, 0.1, 0.5), InvalidArgument);
  EXPECT_THROW(MdpModel(2, 1, {0}, {0, 0}, 0.1, 0.5), InvalidArgument);
  EXPECT_THROW(parse_noise_kind("gaussian"), InvalidArgument);
}

TEST(MdpModel, KernelDecompositionByEnumeration) {
  for (NoiseKind kind : {NoiseKind::kUniform, NoiseKind::kUniformExcludingCurrent}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const std::size_t S = 8 + 14 * seed;
      MdpModel m(S, 3, sample_skeleton(S, 3, seed), sample_rewards(S, 3, seed), 0.13, 0.9, kind);
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < 3; ++a) {
          double row = 0.0;
          for (std::size_t n = 0; n < S; ++n) {
            EXPECT_NEAR(m.transition_probability(s, a, n), oracle::kernel(m, s, a, n), 1e-15);
            row += m.transition_probability(s, a, n);
          }
          EXPECT_NEAR(row, 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(Step, DeterministicCaseFollowsSkeleton) {
  MdpModel m(16, 3, sample_skeleton(16, 3, 4), sample_rewards(16, 3, 4), 0.0, 0.9);
  const Policy p = sample_policy(16, 3, 0.0, 4);
  Rng rng = make_rng(1);
  std::size_t s = 0;
  for (int i = 0; i < 1000; ++i) {
    const Transition tr = step(m, p, s, rng);
    EXPECT_EQ(tr.action, p.preferred(s));
    EXPECT_EQ(tr.next_state, m.successor(s, p.preferred(s)));
    EXPECT_EQ(tr.reward, m.reward(s, tr.action));
    s = tr.next_state;
  }
}

TEST(Step, UniformNoiseFrequencies) {
  MdpModel m(2, 1, {0, 0}, {0.25, 0.5}, 1.0, 0.5);
  const Policy p(1, {0, 0}, 0.0);
  Rng rng = make_rng(99);
  std::size_t ones = 0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Transition tr = step(m, p, 0, rng);
    ones += tr.next_state;
    EXPECT_EQ(tr.reward, 0.25);
  }
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.01);
}

TEST(Step, RewardMatchesSampledAction) {
  MdpModel m(10, 4, sample_skeleton(10, 4, 3), sample_rewards(10, 4, 3), 0.2, 0.9);
  const Policy p = sample_policy(10, 4, 0.5, 3);
  Rng rng = make_rng(3);
  std::size_t s = 0;
  for (int i = 0; i < 2000; ++i) {
    const Transition tr = step(m, p, s, rng);
    EXPECT_EQ(tr.reward, m.reward(s, tr.action));
    s = tr.next_state;
  }
  EXPECT_THROW(step(m, p, 10, rng), IndexError);
}

TEST(Step, ExcludingCurrentNeverStaysOnNoise) {
  MdpModel m(5, 1, {0, 1, 2, 3, 4}, std::vector<double>(5, 0.0), 1.0, 0.5,
             NoiseKind::kUniformExcludingCurrent);
  Rng rng = make_rng(5);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t s = static_cast<std::size_t>(i % 5);
    EXPECT_NE(step_with_action(m, s, 0, rng).next_state, s);
  }
}
