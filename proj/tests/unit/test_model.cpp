#include <gtest/gtest.h>

#include <random>

#include "kbc/model.hpp"
#include "kbc_test_support.hpp"

using namespace kbc;
using kbc::testing::random_model;

namespace {

constexpr ModelVariant kVariants[] = {ModelVariant::cp, ModelVariant::complex, ModelVariant::distmult};

}  // namespace

TEST(InitModel, DeterministicAndShaped) {
  ModelConfig c{ModelVariant::cp, 3, 0.1, 42};
  auto a = init_model(c, 5, 2);
  auto b = init_model(c, 5, 2);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.factors().size(), 3u);
  EXPECT_EQ(a.factor(0).rows(), 5u);
  EXPECT_EQ(a.factor(1).rows(), 2u);
  EXPECT_EQ(a.factor(2).rows(), 5u);
  for (const auto& f : a.factors()) EXPECT_EQ(f.cols(), 3u);
  c.seed = 43;
  EXPECT_FALSE(init_model(c, 5, 2) == a);
}

TEST(InitModel, FactorCountsPerVariant) {
  EXPECT_EQ(init_model({ModelVariant::complex, 2, 0.1, 0}, 4, 3).factors().size(), 4u);
  EXPECT_EQ(init_model({ModelVariant::distmult, 2, 0.1, 0}, 4, 3).factors().size(), 2u);
}

TEST(InitModel, ScaleMatchesStandardDeviation) {
  auto m = init_model({ModelVariant::cp, 50, 0.2, 1}, 200, 10);
  double s = 0, n = 0;
  for (Real x : m.factor(0).values()) s += double(x) * x, ++n;
  EXPECT_NEAR(std::sqrt(s / n), 0.2, 0.01);
}

TEST(InitModel, InvalidConfigRejected) {
  EXPECT_THROW(init_model({ModelVariant::cp, 2, 0.0, 0}, 4, 3), ConfigError);
  EXPECT_THROW(init_model({ModelVariant::cp, 0, 0.1, 0}, 4, 3), ConfigError);
  EXPECT_THROW(model_variant_from_string("TransE"), ConfigError);
}

TEST(Score, AllOnesCp) {
  ModelParams m(ModelVariant::cp, 3, 2, 4);
  for (auto& f : m.factors()) f.fill(1);
  EXPECT_EQ(score_triple(m, 0, 1, 2), 4);
}

TEST(Score, ComplexHandExample) {
  ModelParams m(ModelVariant::complex, 2, 1, 1);
  m.factor(0)(0, 0) = 1;  // E[0] = 1
  m.factor(1)(1, 0) = 1;  // E[1] = i
  m.factor(2)(0, 0) = 1;  // W[0] = 1
  EXPECT_EQ(score_triple(m, 0, 0, 1), 0);
  // Re(i * 1 * conj(1)) = 0 as well; Re(1 * 1 * conj(1)) = 1.
  EXPECT_EQ(score_triple(m, 0, 0, 0), 1);
  m.factor(3)(0, 0) = 1;  // W = 1 + i: Re(1 * (1+i) * conj(i)) = Re((1+i)(-i)) = 1
  EXPECT_EQ(score_triple(m, 0, 0, 1), 1);
}

TEST(Score, IndexOutOfRange) {
  auto m = random_model(ModelVariant::cp, 4, 2, 3, 0);
  EXPECT_THROW(score_triple(m, 4, 0, 0), DimensionError);
  EXPECT_THROW(score_triple(m, 0, 2, 0), DimensionError);
  EXPECT_THROW(score_rhs_fiber(m, 0, 5), DimensionError);
}

TEST(Score, DistMultSymmetricExactly) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto m = random_model(ModelVariant::distmult, 12, 3, 7, seed);
    for (Index i = 0; i < 12; ++i)
      for (Index j = 0; j < 3; ++j)
        for (Index k = 0; k < 12; ++k) ASSERT_EQ(score_triple(m, i, j, k), score_triple(m, k, j, i));
  }
}

TEST(Score, ComplexAsymmetricUnlessReal) {
  auto m = random_model(ModelVariant::complex, 6, 2, 4, 3);
  bool asymmetric = false;
  for (Index i = 0; i < 6; ++i)
    for (Index k = 0; k < 6; ++k) asymmetric |= score_triple(m, i, 0, k) != score_triple(m, k, 0, i);
  EXPECT_TRUE(asymmetric);

  m.factor(1).fill(0);
  m.factor(3).fill(0);
  ModelParams d(ModelVariant::distmult, 6, 2, 4);
  d.factor(0) = m.factor(0);
  d.factor(1) = m.factor(2);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 2; ++j)
      for (Index k = 0; k < 6; ++k) {
        ASSERT_EQ(score_triple(m, i, j, k), score_triple(m, k, j, i));
        ASSERT_EQ(score_triple(m, i, j, k), score_triple(d, i, j, k));
      }
}

TEST(Score, CpMultilinearInSubjectRow) {
  auto m = random_model(ModelVariant::cp, 8, 3, 5, 9);
  auto scaled = m;
  for (Real& x : scaled.factor(0).row(2)) x *= 2;
  for (Index j = 0; j < 3; ++j)
    for (Index k = 0; k < 8; ++k) EXPECT_EQ(score_triple(scaled, 2, j, k), 2 * score_triple(m, 2, j, k));
}

TEST(Fiber, EqualsPerTripleScoresExactly) {
  for (auto v : kVariants) {
    auto m = random_model(v, 50, 4, 6, 17);
    for (Index a = 0; a < 50; a += 7) {
      for (Index j = 0; j < 4; ++j) {
        auto rhs = score_rhs_fiber(m, a, j);
        auto lhs = score_lhs_fiber(m, j, a);
        ASSERT_EQ(rhs.size(), 50u);
        for (Index c = 0; c < 50; ++c) {
          ASSERT_EQ(rhs[c], score_triple(m, a, j, c)) << to_string(v);
          ASSERT_EQ(lhs[c], score_triple(m, c, j, a)) << to_string(v);
        }
      }
    }
  }
}

TEST(Fiber, ZeroModelGivesZeroFiber) {
  for (auto v : kVariants) {
    ModelParams m(v, 5, 2, 3);
    for (Real x : score_rhs_fiber(m, 1, 1)) EXPECT_EQ(x, 0);
    for (Real x : score_lhs_fiber(m, 1, 1)) EXPECT_EQ(x, 0);
  }
}

TEST(Fiber, RankOneCpIsScaledColumn) {
  auto m = random_model(ModelVariant::cp, 6, 2, 1, 4);
  m.factor(0)(1, 0) = 2;
  m.factor(1)(0, 0) = 3;
  auto f = score_rhs_fiber(m, 1, 0);
  for (Index k = 0; k < 6; ++k) EXPECT_EQ(f[k], 3 * (2 * m.factor(2)(k, 0)));
}

TEST(Fiber, DistMultLhsEqualsRhs) {
  auto m = random_model(ModelVariant::distmult, 20, 3, 5, 8);
  for (Index j = 0; j < 3; ++j)
    for (Index k = 0; k < 20; ++k) EXPECT_EQ(score_lhs_fiber(m, j, k), score_rhs_fiber(m, k, j));
}

TEST(BatchScore, RowsEqualSingleFibers) {
  std::mt19937_64 rng(2);
  for (auto v : kVariants) {
    auto m = random_model(v, 100, 5, 8, 21);
    std::uniform_int_distribution<Index> e(0, 99), p(0, 4);
    std::vector<std::pair<Index, Index>> rhs, lhs;
    for (int b = 0; b < 32; ++b) {
      rhs.emplace_back(e(rng), p(rng));
      lhs.emplace_back(p(rng), e(rng));
    }
    rhs.push_back(rhs.front());
    auto R = batch_score_rhs(m, rhs);
    auto L = batch_score_lhs(m, lhs);
    ASSERT_EQ(R.rows(), rhs.size());
    ASSERT_EQ(R.cols(), 100u);
    for (std::size_t b = 0; b < rhs.size(); ++b) {
      auto f = score_rhs_fiber(m, rhs[b].first, rhs[b].second);
      for (Index c = 0; c < 100; ++c) ASSERT_EQ(R(b, c), f[c]);
    }
    for (std::size_t b = 0; b < lhs.size(); ++b) {
      auto f = score_lhs_fiber(m, lhs[b].first, lhs[b].second);
      for (Index c = 0; c < 100; ++c) ASSERT_EQ(L(b, c), f[c]);
    }
    for (Index c = 0; c < 100; ++c) EXPECT_EQ(R(0, c), R(rhs.size() - 1, c));
  }
}

TEST(BatchScore, SingletonBatch) {
  auto m = random_model(ModelVariant::complex, 30, 2, 3, 5);
  std::vector<std::pair<Index, Index>> one{{4, 1}};
  auto R = batch_score_rhs(m, one);
  auto f = score_rhs_fiber(m, 4, 1);
  EXPECT_TRUE(std::equal(f.begin(), f.end(), R.row(0).begin()));
}

TEST(ModelParams, SwapPredicateRowsAndFiniteness) {
  auto m = random_model(ModelVariant::complex, 4, 4, 2, 6);
  auto s = m;
  s.swap_predicate_rows(0, 3);
  EXPECT_EQ(score_triple(s, 1, 3, 2), score_triple(m, 1, 0, 2));
  EXPECT_TRUE(m.all_finite());
  m.factor(0)(0, 0) = std::numeric_limits<Real>::quiet_NaN();
  EXPECT_FALSE(m.all_finite());
}
