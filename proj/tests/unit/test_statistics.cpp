#include <gtest/gtest.h>

#include <numeric>

#include "kbc/statistics.hpp"
#include "kbc_test_support.hpp"

using namespace kbc;

TEST(Marginals, Counting) {
  TripleStore s({{0, 0, 1}, {1, 0, 1}}, 2, 1);
  auto q = compute_marginals(s);
  EXPECT_EQ(q.subject, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(q.predicate, (std::vector<double>{1.0}));
  EXPECT_EQ(q.object, (std::vector<double>{0.0, 1.0}));
}

TEST(Marginals, SingleTripleIsIndicator) {
  TripleStore s({{2, 1, 0}}, 3, 2);
  auto q = compute_marginals(s);
  EXPECT_EQ(q.subject, (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(q.predicate, (std::vector<double>{0, 1}));
  EXPECT_EQ(q.object, (std::vector<double>{1, 0, 0}));
}

TEST(Marginals, UniformStoreGivesUniformMarginals) {
  std::vector<Triple> all;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index k = 0; k < 4; ++k) all.push_back({i, j, k});
  auto q = compute_marginals(TripleStore(all, 4, 3));
  for (double x : q.subject) EXPECT_DOUBLE_EQ(x, 0.25);
  for (double x : q.predicate) EXPECT_DOUBLE_EQ(x, 1.0 / 3);
  for (double x : q.object) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(Marginals, SumToOneOnRandomStores) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto q = compute_marginals(kbc::testing::random_store(97, 13, 5, seed));
    for (int d = 0; d < 3; ++d) {
      const auto& m = q.mode(d);
      EXPECT_NEAR(std::accumulate(m.begin(), m.end(), 0.0), 1.0, 1e-12);
      for (double x : m) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(Marginals, EmptyStoreRejected) { EXPECT_THROW(compute_marginals(TripleStore({}, 2, 1)), DimensionError); }

TEST(RelationTypes, BijectionIsOneToOne) {
  std::vector<Triple> t;
  for (Index n = 0; n < 10; ++n) t.push_back({n, 0, static_cast<Index>(10 + n)});
  auto table = relation_type_table(augment_reciprocal(TripleStore(t, 20, 1)));
  ASSERT_EQ(table.rows.size(), 2u);
  for (const auto& row : table.rows) {
    EXPECT_EQ(row.category, RelationCategory::one_to_one);
    EXPECT_DOUBLE_EQ(row.avg_in_degree, 1.0);
    EXPECT_DOUBLE_EQ(row.avg_out_degree, 1.0);
  }
}

TEST(RelationTypes, OneSubjectManyObjects) {
  std::vector<Triple> t;
  for (Index n = 1; n <= 10; ++n) t.push_back({0, 0, n});
  auto table = relation_type_table(augment_reciprocal(TripleStore(t, 11, 1)));
  EXPECT_EQ(table.category(0), RelationCategory::one_to_many);
  EXPECT_EQ(table.category(1), RelationCategory::many_to_one);
  EXPECT_DOUBLE_EQ(table.rows[0].avg_out_degree, 10.0);
  EXPECT_DOUBLE_EQ(table.rows[0].avg_in_degree, 1.0);
}

TEST(RelationTypes, AbsentPredicatesReportedSeparately) {
  TripleStore s({{0, 0, 1}}, 2, 2);
  auto table = relation_type_table(augment_reciprocal(s));
  EXPECT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.missing, (std::vector<Index>{1, 3}));
  EXPECT_FALSE(table.category(1));
}

TEST(RelationTypes, RawStoreRejected) {
  EXPECT_THROW(relation_type_table(TripleStore({{0, 0, 1}}, 2, 1)), ConfigError);
}

TEST(RelationTypes, DegreesAtLeastOneAndCategoryFollowsCutoff) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto table = relation_type_table(augment_reciprocal(kbc::testing::random_store(80, 12, 4, seed)), 1.5);
    for (const auto& row : table.rows) {
      EXPECT_GE(row.avg_in_degree, 1.0);
      EXPECT_GE(row.avg_out_degree, 1.0);
      const bool many_left = row.avg_in_degree > 1.5, many_right = row.avg_out_degree > 1.5;
      const RelationCategory expected = many_left ? (many_right ? RelationCategory::many_to_many
                                                                : RelationCategory::many_to_one)
                                                  : (many_right ? RelationCategory::one_to_many
                                                                : RelationCategory::one_to_one);
      EXPECT_EQ(row.category, expected);
    }
  }
}
