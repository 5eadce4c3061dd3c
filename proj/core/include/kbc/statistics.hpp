#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "kbc/triple_store.hpp"

namespace kbc {

/// Empirical probability of each index appearing in subject, predicate and object
/// position of a uniformly drawn training triple.
struct ModeMarginals {
  std::vector<double> subject;
  std::vector<double> predicate;
  std::vector<double> object;

  const std::vector<double>& mode(int d) const;
};

ModeMarginals compute_marginals(const TripleStore& store);

enum class RelationCategory { one_to_one, one_to_many, many_to_one, many_to_many };

std::string_view to_string(RelationCategory category);
inline constexpr std::array<RelationCategory, 4> kRelationCategories = {
    RelationCategory::one_to_one, RelationCategory::many_to_one, RelationCategory::one_to_many,
    RelationCategory::many_to_many};

struct RelationTypeRow {
  Index predicate = 0;
  double avg_in_degree = 0;   // triples per distinct object
  double avg_out_degree = 0;  // triples per distinct subject
  RelationCategory category = RelationCategory::one_to_one;
};

/// Degree statistics of every directed predicate (reciprocals included).
struct RelationTypeTable {
  double cutoff = 1.5;
  std::size_t base_predicates = 0;
  std::vector<RelationTypeRow> rows;
  /// Directed predicates with no training triple; they have no category.
  std::vector<Index> missing;

  /// Category of a directed predicate, if it had training triples.
  std::optional<RelationCategory> category(Index directed_predicate) const;

 private:
  friend RelationTypeTable relation_type_table(const TripleStore&, double);
  std::vector<int> slot_;  // directed predicate -> row index or -1
};

/// Category is "1-" when the average in-degree is at most `cutoff`, "m-" otherwise; the
/// right-hand side is decided the same way from the average out-degree.
/// `store` must be reciprocal-augmented.
RelationTypeTable relation_type_table(const TripleStore& store, double cutoff = 1.5);

}  // namespace kbc
