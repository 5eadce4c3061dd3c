#include "kbc/filter_index.hpp"

#include <algorithm>

namespace kbc {

namespace {

const std::vector<Index> kEmpty;

void finalize(std::unordered_map<std::uint64_t, std::vector<Index>>& map) {
  for (auto& [_, v] : map) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

}  // namespace

std::span<const Index> FilterIndex::rhs(Index anchor, Index predicate) const {
  auto it = rhs_.find(key(anchor, predicate));
  return it == rhs_.end() ? std::span<const Index>(kEmpty) : std::span<const Index>(it->second);
}

std::span<const Index> FilterIndex::lhs(Index predicate, Index target) const {
  auto it = lhs_.find(key(predicate, target));
  return it == lhs_.end() ? std::span<const Index>(kEmpty) : std::span<const Index>(it->second);
}

FilterIndex build_filter_index(std::span<const TripleStore* const> stores, bool reciprocal) {
  FilterIndex index;
  index.reciprocal_ = reciprocal;
  if (stores.empty()) return index;

  index.num_entities_ = stores.front()->num_entities();
  index.base_predicates_ = stores.front()->num_predicates();
  for (const TripleStore* s : stores) {
    if (s->augmented()) throw DimensionError("filter index expects raw stores, got an augmented one");
    if (s->num_entities() != index.num_entities_ || s->num_predicates() != index.base_predicates_) {
      throw DimensionError("filter index stores disagree on N or P");
    }
  }

  const auto p = static_cast<Index>(index.base_predicates_);
  for (const TripleStore* s : stores) {
    for (const auto& t : s->triples()) {
      index.rhs_[FilterIndex::key(t.subject, t.predicate)].push_back(t.object);
      index.lhs_[FilterIndex::key(t.predicate, t.object)].push_back(t.subject);
      if (reciprocal) index.rhs_[FilterIndex::key(t.object, t.predicate + p)].push_back(t.subject);
    }
  }
  finalize(index.rhs_);
  finalize(index.lhs_);
  return index;
}

}  // namespace kbc
