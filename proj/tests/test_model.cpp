#include <gtest/gtest.h>

#include <cmath>

#include "ccga/checks.hpp"
#include "ccga/model.hpp"
#include "oracles.hpp"

using namespace ccga;

TEST(Resolution, ValidatesShape) {
  EXPECT_THROW(Resolution(1, 3), InvalidInput);
  EXPECT_THROW(Resolution(2, 0), InvalidInput);
  const Resolution res(3, 4);
  EXPECT_EQ(res.grid_size(), 12);
  EXPECT_EQ(res.eta<Rational>(), Rational(1, 12));
}

TEST(Resolution, FromEtaRequiresNaturalInverse) {
  EXPECT_EQ(Resolution::from_eta(Rational(1, 6), 3).multiplier(), 2);
  EXPECT_THROW(Resolution::from_eta(Rational(1, 7), 3), InvalidInput);
  EXPECT_THROW(Resolution::from_eta(Rational(1, 2), 3), InvalidInput);
  EXPECT_THROW(Resolution::from_eta(Rational(0), 3), InvalidInput);
}

TEST(InitParams, UniformOverCategories) {
  const GridParams p = init_params(2, Resolution(3, 4));
  EXPECT_TRUE((p.counts().array() == 4).all());
  for (Index d = 0; d < 2; ++d) {
    for (Index k = 0; k < 3; ++k) EXPECT_EQ(p.theta<Rational>(d, k), Rational(1, 3));
  }
}

TEST(InitParams, SmallestGrid) {
  const GridParams p = init_params(1, Resolution(2, 1));
  EXPECT_EQ(p.count(0, 0), 1);
  EXPECT_EQ(p.count(0, 1), 1);
  EXPECT_EQ(p.theta<Rational>(0, 0), Rational(1, 2));
}

TEST(InitParams, LargeGridRowSums) {
  const Count m = static_cast<Count>(std::ceil(8 * std::log(1280.0)));
  const GridParams p = init_params(64, Resolution(20, m));
  for (Index d = 0; d < 64; ++d) EXPECT_EQ(p.counts().row(d).sum(), 20 * m);
  EXPECT_THROW(init_params(0, Resolution(2, 1)), InvalidInput);
}

TEST(GridParams, RejectsBrokenTables) {
  EXPECT_THROW(oracle::params(2, 5, {{6, 5}}), InvalidInput);
  EXPECT_THROW(oracle::params(2, 5, {{11, -1}}), InvalidInput);
  EXPECT_THROW(oracle::params(3, 5, {{10, 5}}), std::exception);
}

TEST(Sample, DegenerateRows) {
  const GridParams first = oracle::params(3, 2, {{6, 0, 0}});
  const GridParams second = oracle::params(2, 3, {{0, 6}});
  RandomStream stream(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample(first, stream)[0], 0);
    EXPECT_EQ(sample(second, stream)[0], 1);
  }
}

TEST(Sample, FairCoinFrequency) {
  const GridParams p = init_params(1, Resolution(2, 1));
  RandomStream stream(42);
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += sample(p, stream)[0] == 0;
  EXPECT_NEAR(zeros / 100000.0, 0.5, 0.01);
}

TEST(Sample, CategoryFrequenciesMatchCounts) {
  const GridParams p = oracle::params(4, 3, {{1, 2, 3, 6}});
  RandomStream stream(3);
  std::vector<int> hits(4, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(sample(p, stream)[0])];
  for (Index k = 0; k < 4; ++k) {
    const double q = p.theta(0, k);
    const double sigma = std::sqrt(q * (1 - q) / n);
    EXPECT_NEAR(hits[static_cast<std::size_t>(k)] / double(n), q, 5 * sigma);
  }
}

TEST(Sample, SameSeedSameDraws) {
  const GridParams p = init_params(10, Resolution(5, 3));
  RandomStream a(99), b(99);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample(p, a), sample(p, b));
}

TEST(ApplyUpdate, OneStep) {
  const GridParams p = oracle::params(2, 5, {{5, 5}});
  const GridParams q = apply_update(p, oracle::solution({0}), oracle::solution({1}));
  EXPECT_EQ(q.count(0, 0), 6);
  EXPECT_EQ(q.count(0, 1), 4);
}

TEST(ApplyUpdate, TieLeavesDimension) {
  const GridParams p = oracle::params(3, 2, {{2, 2, 2}, {1, 2, 3}});
  const GridParams q = apply_update(p, oracle::solution({1, 0}), oracle::solution({1, 2}));
  EXPECT_EQ(q.counts().row(0), p.counts().row(0));
  EXPECT_EQ(q.count(1, 0), 2);
  EXPECT_EQ(q.count(1, 2), 2);
}

TEST(ApplyUpdate, AbsorbedRowStays) {
  const GridParams p = oracle::params(2, 5, {{10, 0}});
  EXPECT_EQ(apply_update(p, oracle::solution({0}), oracle::solution({0})), p);
}

TEST(ApplyUpdate, Errors) {
  const GridParams p = oracle::params(2, 5, {{10, 0}});
  EXPECT_THROW(apply_update(p, oracle::solution({0, 0}), oracle::solution({0})), InvalidInput);
  EXPECT_THROW(apply_update(p, oracle::solution({0}), oracle::solution({1})), InvariantViolation);
  EXPECT_THROW(apply_update(p, oracle::solution({2}), oracle::solution({0})), InvalidInput);
}

TEST(OptimalAggregates, Examples) {
  const GridParams optimum = oracle::params(2, 3, {{6, 0}, {6, 0}, {6, 0}});
  EXPECT_EQ(optimal_product<Rational>(optimum), 1);
  EXPECT_EQ(optimal_sum<Rational>(optimum), 3);
  EXPECT_EQ(min_optimal<Rational>(optimum), 1);

  const GridParams initial = init_params(4, Resolution(2, 3));
  EXPECT_EQ(optimal_product<Rational>(initial), Rational(1, 16));
  EXPECT_EQ(optimal_sum<Rational>(initial), 2);
  EXPECT_EQ(min_optimal<Rational>(initial), Rational(1, 2));

  const GridParams mixed = oracle::params(2, 5, {{3, 7}, {5, 5}});
  EXPECT_EQ(optimal_product<Rational>(mixed), Rational(3, 20));
  EXPECT_DOUBLE_EQ(optimal_product<double>(mixed), 0.15);
}

TEST(ModelProperties, RandomUpdateSequencesStayOnGrid) {
  RandomStream stream(2024);
  for (int run = 0; run < 20; ++run) {
    const Index D = 1 + static_cast<Index>(stream.uniform_below(6));
    const Index K = 2 + static_cast<Index>(stream.uniform_below(4));
    const Count m = 1 + static_cast<Count>(stream.uniform_below(4));
    GridParams p = random_grid_params(D, Resolution(K, m), stream);
    for (int step = 0; step < 500; ++step) {
      const OneHotSolution x = sample(p, stream);
      const OneHotSolution y = sample(p, stream);
      const GridParams q = apply_update(p, x, y);
      for (Index d = 0; d < D; ++d) {
        ASSERT_EQ(q.counts().row(d).sum(), m * K);
        for (Index k = 0; k < K; ++k) {
          ASSERT_GE(q.count(d, k), 0);
          ASSERT_LE(q.count(d, k), m * K);
          ASSERT_LE(std::abs(q.count(d, k) - p.count(d, k)), 1);
          if (p.count(d, k) == 0 || p.count(d, k) == m * K) ASSERT_EQ(q.count(d, k), p.count(d, k));
        }
      }
      p = q;
    }
  }
}

TEST(RandomGridParams, CoversBoundaryStates) {
  RandomStream stream(5);
  bool saw_zero = false;
  for (int i = 0; i < 200; ++i) {
    const GridParams p = random_grid_params(2, Resolution(3, 2), stream);
    saw_zero = saw_zero || (p.counts().array() == 0).any();
  }
  EXPECT_TRUE(saw_zero);
}

TEST(RandomStream, BoundedDrawsAreInRangeAndDeterministic) {
  RandomStream a(7), b(7);
  for (int i = 0; i < 1000; ++i) {
    const auto bound = 1 + a.next() % 1000;
    b.next();
    const auto x = a.uniform_below(bound);
    EXPECT_LT(x, bound);
    EXPECT_EQ(x, b.uniform_below(bound));
  }
  EXPECT_NE(mix_seed({1, 2}), mix_seed({2, 1}));
  EXPECT_EQ(RandomStream(3).derive(4).next(), RandomStream(3).derive(4).next());
}
