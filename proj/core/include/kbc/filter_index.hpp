#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "kbc/triple_store.hpp"

namespace kbc {

/// Known-true completions of every (anchor, predicate) query, used by the filtered
/// ranking protocol.
///
/// `rhs(i, j)` lists the objects k with (i, j, k) in any indexed store. `lhs(j, k)` lists
/// the subjects i. In reciprocal mode, rhs additionally maps (k, j + P) to i for every
/// triple; the two orientations are kept separate.
class FilterIndex {
 public:
  FilterIndex() = default;

  std::span<const Index> rhs(Index anchor, Index predicate) const;
  std::span<const Index> lhs(Index predicate, Index target) const;

  bool reciprocal() const noexcept { return reciprocal_; }
  std::size_t num_entities() const noexcept { return num_entities_; }
  /// P of the indexed raw stores.
  std::size_t base_predicates() const noexcept { return base_predicates_; }
  std::size_t rhs_keys() const noexcept { return rhs_.size(); }
  std::size_t lhs_keys() const noexcept { return lhs_.size(); }

 private:
  friend FilterIndex build_filter_index(std::span<const TripleStore* const> stores, bool reciprocal);

  static std::uint64_t key(Index a, Index b) noexcept { return (std::uint64_t{a} << 32) | b; }

  std::unordered_map<std::uint64_t, std::vector<Index>> rhs_;
  std::unordered_map<std::uint64_t, std::vector<Index>> lhs_;
  bool reciprocal_ = false;
  std::size_t num_entities_ = 0;
  std::size_t base_predicates_ = 0;
};

/// Indexes the union of raw (non-augmented) stores that share N and P.
FilterIndex build_filter_index(std::span<const TripleStore* const> stores, bool reciprocal);

inline FilterIndex build_filter_index(std::initializer_list<const TripleStore*> stores, bool reciprocal) {
  return build_filter_index(std::span<const TripleStore* const>(stores.begin(), stores.size()), reciprocal);
}

}  // namespace kbc
