#include "kbc/eval.hpp"

#include <string>
#include <unordered_map>

namespace kbc {

namespace {

struct FiberPlan {
  // Distinct fibers, each with the positions of the queries it answers.
  std::vector<std::pair<Index, Index>> pairs;
  std::vector<std::vector<std::size_t>> members;
  std::unordered_map<std::uint64_t, std::size_t> slot;

  void add(Index a, Index b, std::size_t query) {
    const std::uint64_t key = (std::uint64_t{a} << 32) | b;
    auto [it, inserted] = slot.try_emplace(key, pairs.size());
    if (inserted) {
      pairs.emplace_back(a, b);
      members.emplace_back();
    }
    members[it->second].push_back(query);
  }
};

void check_setup(const ModelParams& model, const FilterIndex& filter, Formulation formulation) {
  const std::size_t p = filter.base_predicates();
  if (model.num_entities() != filter.num_entities()) {
    throw DimensionError("model has " + std::to_string(model.num_entities()) + " entities, filter index has " +
                         std::to_string(filter.num_entities()));
  }
  if (formulation == Formulation::reciprocal) {
    if (!filter.reciprocal()) throw ConfigError("reciprocal evaluation needs a reciprocal filter index");
    if (model.num_predicates() != 2 * p) throw DimensionError("reciprocal model must have 2P predicates");
  } else if (model.num_predicates() != p) {
    throw DimensionError("standard model must have P predicates");
  }
}

}  // namespace

std::string_view to_string(Formulation formulation) {
  return formulation == Formulation::standard ? "standard" : "reciprocal";
}

Formulation formulation_from_string(std::string_view name) {
  if (name == "standard") return Formulation::standard;
  if (name == "reciprocal") return Formulation::reciprocal;
  throw ConfigError("unknown formulation '" + std::string(name) + "' (expected standard or reciprocal)");
}

std::size_t rank_in_fiber(std::span<const Real> scores, Index target, std::span<const Index> filtered) {
  if (target >= scores.size()) throw DimensionError("target " + std::to_string(target) + " outside the candidate range");
  const Real t = scores[target];
  std::size_t above = 0;
  for (Real s : scores) above += s > t ? 1 : 0;
  for (Index f : filtered) {
    if (f != target && f < scores.size() && scores[f] > t) --above;
  }
  return above + 1;
}

std::size_t filtered_rank(const ModelParams& model, const Query& query, const FilterIndex& filter,
                          Formulation formulation) {
  check_setup(model, filter, formulation);
  const auto p = static_cast<Index>(filter.base_predicates());
  if (query.direction == QueryDirection::rhs) {
    return rank_in_fiber(score_rhs_fiber(model, query.anchor, query.predicate), query.target,
                         filter.rhs(query.anchor, query.predicate));
  }
  if (formulation == Formulation::reciprocal) {
    return rank_in_fiber(score_rhs_fiber(model, query.anchor, query.predicate + p), query.target,
                         filter.rhs(query.anchor, query.predicate + p));
  }
  return rank_in_fiber(score_lhs_fiber(model, query.predicate, query.anchor), query.target,
                       filter.lhs(query.predicate, query.anchor));
}

std::vector<std::size_t> rank_queries(const ModelParams& model, const TripleStore& test, const FilterIndex& filter,
                                      Formulation formulation, const EvalOptions& options) {
  if (test.empty()) throw ConfigError("cannot evaluate an empty store");
  if (test.augmented()) throw ConfigError("evaluation expects a raw store");
  if (test.num_predicates() != filter.base_predicates() || test.num_entities() != filter.num_entities()) {
    throw DimensionError("evaluation store does not match the filter index");
  }
  check_setup(model, filter, formulation);

  const std::size_t n_triples =
      options.max_triples == 0 ? test.size() : std::min(options.max_triples, test.size());
  const auto p = static_cast<Index>(filter.base_predicates());
  const bool reciprocal = formulation == Formulation::reciprocal;

  // Object fibers answer rhs queries (and lhs queries in reciprocal mode); subject fibers
  // answer lhs queries in standard mode.
  FiberPlan rhs_plan, lhs_plan;
  std::vector<Index> targets(2 * n_triples);
  for (std::size_t t = 0; t < n_triples; ++t) {
    const Triple& tr = test[t];
    rhs_plan.add(tr.subject, tr.predicate, 2 * t);
    targets[2 * t] = tr.object;
    if (reciprocal) {
      rhs_plan.add(tr.object, tr.predicate + p, 2 * t + 1);
    } else {
      lhs_plan.add(tr.predicate, tr.object, 2 * t + 1);
    }
    targets[2 * t + 1] = tr.subject;
  }

  std::vector<std::size_t> ranks(2 * n_triples, 0);
  const std::size_t block = std::max<std::size_t>(1, options.block);
  auto run = [&](const FiberPlan& plan, bool lhs_fiber) {
    for (std::size_t s0 = 0; s0 < plan.pairs.size(); s0 += block) {
      const std::size_t s1 = std::min(plan.pairs.size(), s0 + block);
      const std::span<const std::pair<Index, Index>> pairs(plan.pairs.data() + s0, s1 - s0);
      const Matrix scores = lhs_fiber ? batch_score_lhs(model, pairs) : batch_score_rhs(model, pairs);
      for (std::size_t s = s0; s < s1; ++s) {
        const auto [a, b] = plan.pairs[s];
        std::span<const Index> known;
        if (options.filtered) known = lhs_fiber ? filter.lhs(a, b) : filter.rhs(a, b);
        for (std::size_t q : plan.members[s]) ranks[q] = rank_in_fiber(scores.row(s - s0), targets[q], known);
      }
    }
  };
  run(rhs_plan, false);
  run(lhs_plan, true);
  return ranks;
}

EvalResult summarize_ranks(std::span<const std::size_t> ranks) {
  EvalResult res;
  res.n_queries = ranks.size();
  if (ranks.empty()) return res;
  double rr = 0.0;
  std::size_t h1 = 0, h3 = 0, h10 = 0;
  for (std::size_t r : ranks) {
    rr += 1.0 / static_cast<double>(r);
    h1 += r <= 1;
    h3 += r <= 3;
    h10 += r <= 10;
  }
  const double n = static_cast<double>(ranks.size());
  res.mrr = rr / n;
  res.hits1 = static_cast<double>(h1) / n;
  res.hits3 = static_cast<double>(h3) / n;
  res.hits10 = static_cast<double>(h10) / n;
  return res;
}

EvalResult evaluate(const ModelParams& model, const TripleStore& test, const FilterIndex& filter,
                    Formulation formulation, const EvalOptions& options) {
  const auto ranks = rank_queries(model, test, filter, formulation, options);
  EvalResult res = summarize_ranks(ranks);
  if (options.relation_types) {
    const RelationTypeTable& table = *options.relation_types;
    if (table.base_predicates != filter.base_predicates()) {
      throw DimensionError("relation type table does not match the dataset");
    }
    const auto p = static_cast<Index>(table.base_predicates);
    std::map<RelationCategory, double> sums;
    std::map<RelationCategory, std::size_t> counts;
    for (std::size_t q = 0; q < ranks.size(); ++q) {
      const Index j = test[q / 2].predicate;
      const auto cat = table.category(q % 2 == 0 ? j : j + p);
      if (!cat) {
        ++res.uncategorized;
        continue;
      }
      sums[*cat] += 1.0 / static_cast<double>(ranks[q]);
      ++counts[*cat];
    }
    std::map<RelationCategory, CategoryResult> breakdown;
    for (const auto& [cat, count] : counts) breakdown[cat] = {sums[cat] / static_cast<double>(count), count};
    res.breakdown = std::move(breakdown);
  }
  return res;
}

std::map<RelationCategory, CategoryResult> per_type_breakdown(const ModelParams& model, const TripleStore& test,
                                                              const FilterIndex& filter,
                                                              const RelationTypeTable& table,
                                                              Formulation formulation) {
  EvalOptions options;
  options.relation_types = &table;
  return *evaluate(model, test, filter, formulation, options).breakdown;
}

}  // namespace kbc
