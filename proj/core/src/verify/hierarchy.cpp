#include "kbc/verify/hierarchy.hpp"

#include <cmath>
#include <vector>

#include "kbc/eval.hpp"
#include "kbc/filter_index.hpp"

namespace kbc::verify {

namespace {

void check(const HierarchyParams& h) {
  if (h.branching <= 2) throw ConfigError("hierarchy branching must be greater than 2");
  if (h.depth < 1) throw ConfigError("hierarchy depth must be at least 1");
}

}  // namespace

double internal_nodes(const HierarchyParams& h) {
  check(h);
  const double n = static_cast<double>(h.branching);
  return (std::pow(n, static_cast<double>(h.depth)) - n) / (n - 1.0);
}

double hierarchy_mrr_closed_form(const HierarchyParams& h) {
  const double k = internal_nodes(h);
  const double n = static_cast<double>(h.branching);
  const double leaves = std::pow(n, static_cast<double>(h.depth));
  return (leaves + n + k / (n + 1.0) + k * n) / (leaves + n + (n + 1.0) * k);
}

TripleStore hierarchy_store(const HierarchyParams& h) {
  check(h);
  std::vector<Triple> edges;
  std::size_t level_start = 0, level_size = 1, next = 1;
  for (std::size_t level = 0; level < h.depth; ++level) {
    for (std::size_t node = level_start; node < level_start + level_size; ++node) {
      for (std::size_t c = 0; c < h.branching; ++c) {
        edges.push_back({static_cast<Index>(node), 0, static_cast<Index>(next++)});
      }
    }
    level_start += level_size;
    level_size *= h.branching;
  }
  return TripleStore(std::move(edges), next, 1);
}

double hierarchy_mrr_simulated(const HierarchyParams& h) {
  const TripleStore store = hierarchy_store(h);
  const std::size_t n_nodes = store.num_entities();

  // Node depth and tree neighbours with their edge scores.
  std::vector<std::size_t> depth(n_nodes, 0);
  std::vector<std::vector<std::pair<Index, Real>>> adjacent(n_nodes);
  for (const auto& t : store.triples()) {
    depth[t.object] = depth[t.subject] + 1;
    const Real s = static_cast<Real>(1 + depth[t.subject]);
    adjacent[t.subject].emplace_back(t.object, s);
    adjacent[t.object].emplace_back(t.subject, s);
  }
  auto fiber = [&](Index anchor) {
    std::vector<Real> scores(n_nodes, Real{0});
    for (const auto& [other, s] : adjacent[anchor]) scores[other] = s;
    return scores;
  };

  const FilterIndex filter = build_filter_index({&store}, false);
  std::vector<std::size_t> ranks;
  ranks.reserve(2 * store.size());
  for (const auto& t : store.triples()) {
    ranks.push_back(rank_in_fiber(fiber(t.subject), t.object, filter.rhs(t.subject, t.predicate)));
    ranks.push_back(rank_in_fiber(fiber(t.object), t.subject, filter.lhs(t.predicate, t.object)));
  }
  return summarize_ranks(ranks).mrr;
}

}  // namespace kbc::verify
