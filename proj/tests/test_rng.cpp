#include "agfti/rng.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using agfti::CounterRng;

TEST(Rng, MatchesSequentialSplitMix) {
  for (std::uint64_t key : {0ULL, 1ULL, 0xDEADBEEFULL}) {
    CounterRng rng(key);
    oracle::SplitMix64 ref{key};
    for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.next(), ref.next());
  }
}

TEST(Rng, KnownFirstOutput) {
  // First output of SplitMix64 seeded with 0.
  EXPECT_EQ(CounterRng(0).next(), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, UniformRanges) {
  CounterRng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.uniform_index(7), 7u);
  }
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.uniform_index(5)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, NormalMoments) {
  CounterRng rng(8);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Rng, ShuffleIsPermutationAndDeterministic) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  b = a;
  CounterRng r1(9), r2(9);
  r1.shuffle(std::span<int>(a));
  r2.shuffle(std::span<int>(b));
  EXPECT_EQ(a, b);
  std::sort(a.begin(), a.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a[i], i);
}

TEST(Rng, DerivedStreamsDiffer) {
  EXPECT_NE(CounterRng::derive(1, 0), CounterRng::derive(1, 1));
  EXPECT_NE(CounterRng::derive(1, 0), CounterRng::derive(2, 0));
  EXPECT_EQ(CounterRng::derive(5, 3), CounterRng::derive(5, 3));
}
