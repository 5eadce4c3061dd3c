#include "kbc/statistics.hpp"

#include <algorithm>
#include <string>

namespace kbc {

const std::vector<double>& ModeMarginals::mode(int d) const {
  switch (d) {
    case 0: return subject;
    case 1: return predicate;
    case 2: return object;
    default: throw DimensionError("mode index must be 0, 1 or 2");
  }
}

ModeMarginals compute_marginals(const TripleStore& store) {
  if (store.empty()) throw DimensionError("cannot compute marginals of an empty store");
  ModeMarginals m;
  m.subject.assign(store.num_entities(), 0.0);
  m.predicate.assign(store.num_predicates(), 0.0);
  m.object.assign(store.num_entities(), 0.0);
  for (const auto& t : store.triples()) {
    m.subject[t.subject] += 1.0;
    m.predicate[t.predicate] += 1.0;
    m.object[t.object] += 1.0;
  }
  const double total = static_cast<double>(store.size());
  for (auto* v : {&m.subject, &m.predicate, &m.object}) {
    for (auto& x : *v) x /= total;
  }
  return m;
}

std::string_view to_string(RelationCategory category) {
  switch (category) {
    case RelationCategory::one_to_one: return "1-1";
    case RelationCategory::one_to_many: return "1-m";
    case RelationCategory::many_to_one: return "m-1";
    case RelationCategory::many_to_many: return "m-m";
  }
  return "?";
}

std::optional<RelationCategory> RelationTypeTable::category(Index directed_predicate) const {
  if (directed_predicate >= slot_.size() || slot_[directed_predicate] < 0) return std::nullopt;
  return rows[static_cast<std::size_t>(slot_[directed_predicate])].category;
}

RelationTypeTable relation_type_table(const TripleStore& store, double cutoff) {
  if (!store.augmented()) throw ConfigError("relation types are computed on a reciprocal-augmented store");

  const std::size_t np = store.num_predicates();
  std::vector<std::vector<Index>> subjects(np), objects(np);
  std::vector<std::size_t> counts(np, 0);
  for (const auto& t : store.triples()) {
    subjects[t.predicate].push_back(t.subject);
    objects[t.predicate].push_back(t.object);
    ++counts[t.predicate];
  }
  auto distinct = [](std::vector<Index>& v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  };

  RelationTypeTable table;
  table.cutoff = cutoff;
  table.base_predicates = store.base_predicates();
  table.slot_.assign(np, -1);
  for (std::size_t j = 0; j < np; ++j) {
    if (counts[j] == 0) {
      table.missing.push_back(static_cast<Index>(j));
      continue;
    }
    RelationTypeRow row;
    row.predicate = static_cast<Index>(j);
    row.avg_out_degree = static_cast<double>(counts[j]) / static_cast<double>(distinct(subjects[j]));
    row.avg_in_degree = static_cast<double>(counts[j]) / static_cast<double>(distinct(objects[j]));
    const bool one_left = row.avg_in_degree <= cutoff;
    const bool one_right = row.avg_out_degree <= cutoff;
    if (one_left && one_right) row.category = RelationCategory::one_to_one;
    else if (one_left) row.category = RelationCategory::one_to_many;
    else if (one_right) row.category = RelationCategory::many_to_one;
    else row.category = RelationCategory::many_to_many;
    table.slot_[j] = static_cast<int>(table.rows.size());
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace kbc
