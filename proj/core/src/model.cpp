#include "kbc/model.hpp"

#include <cmath>
#include <random>
#include <string>

namespace kbc {

namespace {

// Candidate rows scored per pass and queries per cache block.
constexpr std::size_t kCandidateBlock = 16;
constexpr std::size_t kQueryBlock = 64;

void check_entity(const ModelParams& m, Index e) {
  if (e >= m.num_entities()) throw DimensionError("entity index " + std::to_string(e) + " out of range");
}
void check_predicate(const ModelParams& m, Index p) {
  if (p >= m.num_predicates()) throw DimensionError("predicate index " + std::to_string(p) + " out of range");
}

// Gathers rows of `src` selected by `rows` into a rank-major (R x B) buffer.
std::vector<Real> gather_transposed(const Matrix& src, std::span<const Index> rows) {
  const std::size_t b_count = rows.size();
  const std::size_t rank = src.cols();
  std::vector<Real> out(rank * b_count);
  for (std::size_t b = 0; b < b_count; ++b) {
    const auto row = src.row(rows[b]);
    for (std::size_t r = 0; r < rank; ++r) out[r * b_count + b] = row[r];
  }
  return out;
}

// Blocked contraction of (anchor, relation) query profiles with every candidate row.
// The innermost loop runs over queries so each output keeps the sequential r order.
template <typename Term>
Matrix contract(std::size_t batch, std::size_t candidates, std::size_t rank, Term&& term) {
  Matrix out(batch, candidates);
  std::vector<Real> acc(kCandidateBlock * kQueryBlock);
  for (std::size_t b0 = 0; b0 < batch; b0 += kQueryBlock) {
    const std::size_t bb = std::min(kQueryBlock, batch - b0);
    for (std::size_t n0 = 0; n0 < candidates; n0 += kCandidateBlock) {
      const std::size_t nb = std::min(kCandidateBlock, candidates - n0);
      std::fill(acc.begin(), acc.end(), Real{0});
      for (std::size_t r = 0; r < rank; ++r) {
        for (std::size_t nn = 0; nn < nb; ++nn) {
          term(r, n0 + nn, b0, bb, acc.data() + nn * kQueryBlock);
        }
      }
      for (std::size_t nn = 0; nn < nb; ++nn) {
        for (std::size_t b = 0; b < bb; ++b) out(b0 + b, n0 + nn) = acc[nn * kQueryBlock + b];
      }
    }
  }
  return out;
}

enum class Side { rhs, lhs };

Matrix batch_score(const ModelParams& m, std::span<const std::pair<Index, Index>> pairs, Side side) {
  const std::size_t batch = pairs.size();
  const std::size_t rank = m.rank();
  std::vector<Index> anchors(batch), rels(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    // rhs pairs are (subject, predicate); lhs pairs are (predicate, object).
    const Index anchor = side == Side::rhs ? pairs[b].first : pairs[b].second;
    const Index rel = side == Side::rhs ? pairs[b].second : pairs[b].first;
    check_entity(m, anchor);
    check_predicate(m, rel);
    anchors[b] = anchor;
    rels[b] = rel;
  }

  const std::size_t n = m.num_entities();
  switch (m.variant()) {
    case ModelVariant::cp:
    case ModelVariant::distmult: {
      const Matrix& anchor_f = side == Side::rhs ? m.factor(m.subject_factor()) : m.factor(m.object_factor());
      const Matrix& cand_f = side == Side::rhs ? m.factor(m.object_factor()) : m.factor(m.subject_factor());
      const auto at = gather_transposed(anchor_f, anchors);
      const auto wt = gather_transposed(m.factor(m.predicate_factor()), rels);
      return contract(batch, n, rank, [&](std::size_t r, std::size_t cand, std::size_t b0, std::size_t bb, Real* acc) {
        const Real c = cand_f(cand, r);
        const Real* a = at.data() + r * batch + b0;
        const Real* w = wt.data() + r * batch + b0;
        for (std::size_t b = 0; b < bb; ++b) acc[b] += w[b] * (a[b] * c);
      });
    }
    case ModelVariant::complex: {
      const Matrix& e_re = m.factor(0);
      const Matrix& e_im = m.factor(1);
      const auto are = gather_transposed(e_re, anchors);
      const auto aim = gather_transposed(e_im, anchors);
      const auto wre = gather_transposed(m.factor(2), rels);
      const auto wim = gather_transposed(m.factor(3), rels);
      if (side == Side::rhs) {
        // anchor is the subject (a + ib), candidate the object (x + iy)
        return contract(batch, n, rank, [&](std::size_t r, std::size_t cand, std::size_t b0, std::size_t bb, Real* acc) {
          const Real x = e_re(cand, r);
          const Real y = e_im(cand, r);
          const std::size_t off = r * batch + b0;
          for (std::size_t b = 0; b < bb; ++b) {
            const Real a = are[off + b], bi = aim[off + b];
            acc[b] += wre[off + b] * (a * x + bi * y) + wim[off + b] * (a * y - bi * x);
          }
        });
      }
      // anchor is the object (x + iy), candidate the subject (a + ib)
      return contract(batch, n, rank, [&](std::size_t r, std::size_t cand, std::size_t b0, std::size_t bb, Real* acc) {
        const Real a = e_re(cand, r);
        const Real bi = e_im(cand, r);
        const std::size_t off = r * batch + b0;
        for (std::size_t b = 0; b < bb; ++b) {
          const Real x = are[off + b], y = aim[off + b];
          acc[b] += wre[off + b] * (a * x + bi * y) + wim[off + b] * (a * y - bi * x);
        }
      });
    }
  }
  throw Error("unknown model variant");
}

}  // namespace

std::string_view to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::cp: return "CP";
    case ModelVariant::complex: return "ComplEx";
    case ModelVariant::distmult: return "DistMult";
  }
  return "?";
}

ModelVariant model_variant_from_string(std::string_view name) {
  if (name == "CP" || name == "cp") return ModelVariant::cp;
  if (name == "ComplEx" || name == "complex") return ModelVariant::complex;
  if (name == "DistMult" || name == "distmult") return ModelVariant::distmult;
  throw ConfigError("unknown model variant '" + std::string(name) + "' (expected CP, ComplEx or DistMult)");
}

std::vector<std::string_view> factor_names(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::cp: return {"subject", "predicate", "object"};
    case ModelVariant::distmult: return {"entity", "predicate"};
    case ModelVariant::complex: return {"entity_re", "entity_im", "predicate_re", "predicate_im"};
  }
  return {};
}

bool is_entity_factor(ModelVariant variant, std::size_t f) {
  switch (variant) {
    case ModelVariant::cp: return f != 1;
    case ModelVariant::distmult: return f == 0;
    case ModelVariant::complex: return f < 2;
  }
  return false;
}

ModelParams::ModelParams(ModelVariant variant, std::size_t num_entities, std::size_t num_predicates,
                         std::size_t rank)
    : variant_(variant), num_entities_(num_entities), num_predicates_(num_predicates), rank_(rank) {
  const auto names = factor_names(variant);
  for (std::size_t f = 0; f < names.size(); ++f) {
    factors_.emplace_back(is_entity_factor(variant, f) ? num_entities : num_predicates, rank);
  }
}

void ModelParams::swap_predicate_rows(Index a, Index b) {
  if (a >= num_predicates_ || b >= num_predicates_) throw DimensionError("predicate row out of range");
  for (std::size_t f = 0; f < factors_.size(); ++f) {
    if (is_entity_factor(variant_, f)) continue;
    auto ra = factors_[f].row(a);
    auto rb = factors_[f].row(b);
    std::swap_ranges(ra.begin(), ra.end(), rb.begin());
  }
}

bool ModelParams::all_finite() const {
  for (const auto& f : factors_) {
    for (Real v : f.values()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void validate(const ModelConfig& config) {
  if (config.rank < 1) throw ConfigError("rank must be at least 1");
  if (!(config.init_scale > 0.0) || !std::isfinite(config.init_scale)) {
    throw ConfigError("init_scale must be a positive finite number");
  }
}

ModelParams init_model(const ModelConfig& config, std::size_t num_entities, std::size_t num_predicates) {
  validate(config);
  ModelParams model(config.variant, num_entities, num_predicates, config.rank);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, config.init_scale);
  for (auto& f : model.factors()) {
    for (auto& v : f.values()) v = static_cast<Real>(gauss(rng));
  }
  return model;
}

Real score_triple(const ModelParams& m, Index i, Index j, Index k) {
  check_entity(m, i);
  check_predicate(m, j);
  check_entity(m, k);
  const std::size_t rank = m.rank();
  Real acc = 0;
  if (m.variant() == ModelVariant::complex) {
    const auto si = m.factor(0).row(i), sr = m.factor(1).row(i);
    const auto oi = m.factor(0).row(k), orr = m.factor(1).row(k);
    const auto wre = m.factor(2).row(j), wim = m.factor(3).row(j);
    for (std::size_t r = 0; r < rank; ++r) {
      const Real a = si[r], bi = sr[r], x = oi[r], y = orr[r];
      acc += wre[r] * (a * x + bi * y) + wim[r] * (a * y - bi * x);
    }
    return acc;
  }
  const auto s = m.factor(m.subject_factor()).row(i);
  const auto w = m.factor(m.predicate_factor()).row(j);
  const auto o = m.factor(m.object_factor()).row(k);
  for (std::size_t r = 0; r < rank; ++r) acc += w[r] * (s[r] * o[r]);
  return acc;
}

std::vector<Real> score_rhs_fiber(const ModelParams& model, Index i, Index j) {
  const std::pair<Index, Index> q{i, j};
  const Matrix out = batch_score_rhs(model, std::span(&q, 1));
  return {out.values().begin(), out.values().end()};
}

std::vector<Real> score_lhs_fiber(const ModelParams& model, Index j, Index k) {
  const std::pair<Index, Index> q{j, k};
  const Matrix out = batch_score_lhs(model, std::span(&q, 1));
  return {out.values().begin(), out.values().end()};
}

Matrix batch_score_rhs(const ModelParams& model, std::span<const std::pair<Index, Index>> pairs) {
  return batch_score(model, pairs, Side::rhs);
}

Matrix batch_score_lhs(const ModelParams& model, std::span<const std::pair<Index, Index>> pairs) {
  return batch_score(model, pairs, Side::lhs);
}

}  // namespace kbc
