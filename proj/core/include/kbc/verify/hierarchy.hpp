#pragma once

#include <cstddef>

#include "kbc/triple_store.hpp"

namespace kbc::verify {

/// A complete n-ary tree of the given depth, viewed as one hierarchical predicate.
struct HierarchyParams {
  std::size_t branching = 3;  // n, must exceed 2
  std::size_t depth = 1;      // d >= 1
};

/// Internal nodes other than the root: (n^d - n) / (n - 1).
double internal_nodes(const HierarchyParams& h);

/// Filtered MRR of a symmetric scorer that ranks a node's children above its parent.
double hierarchy_mrr_closed_form(const HierarchyParams& h);

/// The tree as (parent, 0, child) triples, nodes numbered breadth-first from the root.
TripleStore hierarchy_store(const HierarchyParams& h);

/// Ranks every (parent, p, ?) and (?, p, child) query of the tree with the symmetric score
/// s(x, y) = 1 + depth(parent) on tree edges and 0 elsewhere, under the filtered protocol.
double hierarchy_mrr_simulated(const HierarchyParams& h);

}  // namespace kbc::verify
