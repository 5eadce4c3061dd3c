#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kbc/filter_index.hpp"
#include "kbc/model.hpp"
#include "kbc/statistics.hpp"
#include "kbc/triple_store.hpp"

namespace kbc {

enum class Formulation { standard, reciprocal };

std::string_view to_string(Formulation formulation);
Formulation formulation_from_string(std::string_view name);

enum class QueryDirection { rhs, lhs };

/// rhs: (anchor, predicate, ?) answered by target. lhs: (?, predicate, anchor) answered by target.
struct Query {
  QueryDirection direction = QueryDirection::rhs;
  Index anchor = 0;
  Index predicate = 0;
  Index target = 0;
};

/// 1 + number of candidates that are not known-true completions and score strictly
/// above the target. `filtered` must be sorted; the target may appear in it.
std::size_t rank_in_fiber(std::span<const Real> scores, Index target, std::span<const Index> filtered);

/// Filtered rank of one query. In reciprocal mode an lhs query (?, j, k) is answered by
/// the object fiber of (k, j + P); in standard mode by the subject fiber of (j, k).
std::size_t filtered_rank(const ModelParams& model, const Query& query, const FilterIndex& filter,
                          Formulation formulation);

struct CategoryResult {
  double mrr = 0;
  std::size_t n_queries = 0;
};

struct EvalResult {
  double mrr = 0;
  double hits1 = 0;
  double hits3 = 0;
  double hits10 = 0;
  std::size_t n_queries = 0;
  std::optional<std::map<RelationCategory, CategoryResult>> breakdown;
  /// Queries whose directed predicate has no category (absent from train).
  std::size_t uncategorized = 0;
};

struct EvalOptions {
  /// Raw (unfiltered) ranks when false.
  bool filtered = true;
  /// Evaluate only the first `max_triples` triples when nonzero.
  std::size_t max_triples = 0;
  /// Per-category breakdown when set.
  const RelationTypeTable* relation_types = nullptr;
  /// Distinct fibers scored per block.
  std::size_t block = 256;
};

/// Ranks of the two queries of every triple, ordered rhs_0, lhs_0, rhs_1, lhs_1, ...
std::vector<std::size_t> rank_queries(const ModelParams& model, const TripleStore& test, const FilterIndex& filter,
                                      Formulation formulation, const EvalOptions& options = {});

EvalResult summarize_ranks(std::span<const std::size_t> ranks);

EvalResult evaluate(const ModelParams& model, const TripleStore& test, const FilterIndex& filter,
                    Formulation formulation, const EvalOptions& options = {});

/// MRR per category of the directed predicate of each query (rhs: j, lhs: j + P).
std::map<RelationCategory, CategoryResult> per_type_breakdown(const ModelParams& model, const TripleStore& test,
                                                              const FilterIndex& filter,
                                                              const RelationTypeTable& table,
                                                              Formulation formulation);

}  // namespace kbc
