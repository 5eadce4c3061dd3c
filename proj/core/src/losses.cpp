#include "kbc/losses.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Core>

namespace kbc {

namespace {

using RowMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

ConstMapMat view(const Matrix& m) { return ConstMapMat(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())); }
MapMat view(Matrix& m) { return MapMat(m.data(), static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols())); }

enum class Side { rhs, lhs };

// Replaces each score row by softmax(row) - onehot(target); returns the summed loss.
double softmax_rows(Matrix& scores, std::span<const Index> targets, bool want_grad) {
  double loss = 0.0;
  const std::size_t n = scores.cols();
  for (std::size_t b = 0; b < scores.rows(); ++b) {
    auto row = scores.row(b);
    double mx = row[0];
    for (std::size_t c = 1; c < n; ++c) mx = std::max(mx, static_cast<double>(row[c]));
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) sum += std::exp(static_cast<double>(row[c]) - mx);
    const double lse = mx + std::log(sum);
    loss += lse - static_cast<double>(row[targets[b]]);
    if (want_grad) {
      for (std::size_t c = 0; c < n; ++c) row[c] = static_cast<Real>(std::exp(static_cast<double>(row[c]) - mx) / sum);
      row[targets[b]] -= Real{1};
    }
  }
  return loss;
}

double fiber_loss(const ModelParams& m, std::span<const Triple> batch, Gradients* grad, Side side) {
  if (batch.empty()) return 0.0;
  const std::size_t bsz = batch.size();
  const std::size_t rank = m.rank();
  std::vector<std::pair<Index, Index>> pairs(bsz);
  std::vector<Index> anchors(bsz), rels(bsz), targets(bsz);
  for (std::size_t b = 0; b < bsz; ++b) {
    const auto& t = batch[b];
    rels[b] = t.predicate;
    if (side == Side::rhs) {
      pairs[b] = {t.subject, t.predicate};
      anchors[b] = t.subject;
      targets[b] = t.object;
    } else {
      pairs[b] = {t.predicate, t.object};
      anchors[b] = t.object;
      targets[b] = t.subject;
    }
  }

  Matrix g = side == Side::rhs ? batch_score_rhs(m, pairs) : batch_score_lhs(m, pairs);
  for (Index t : targets) {
    if (t >= m.num_entities()) throw DimensionError("target entity out of range");
  }
  const double loss = softmax_rows(g, targets, grad != nullptr);
  if (grad == nullptr) return loss;

  const auto gmat = view(std::as_const(g));
  RowMat q(bsz, rank), h(bsz, rank);

  if (m.variant() != ModelVariant::complex) {
    const std::size_t anchor_f = side == Side::rhs ? m.subject_factor() : m.object_factor();
    const std::size_t cand_f = side == Side::rhs ? m.object_factor() : m.subject_factor();
    const std::size_t rel_f = m.predicate_factor();
    const Matrix& anchor = m.factor(anchor_f);
    const Matrix& rel = m.factor(rel_f);
    for (std::size_t b = 0; b < bsz; ++b) {
      const auto a = anchor.row(anchors[b]);
      const auto w = rel.row(rels[b]);
      for (std::size_t r = 0; r < rank; ++r) q(b, r) = w[r] * a[r];
    }
    view(grad->dense(cand_f)).noalias() += gmat.transpose() * q;
    h.noalias() = gmat * view(m.factor(cand_f));
    for (std::size_t b = 0; b < bsz; ++b) {
      const auto a = anchor.row(anchors[b]);
      const auto w = rel.row(rels[b]);
      auto da = grad->row(anchor_f, anchors[b]);
      for (std::size_t r = 0; r < rank; ++r) da[r] += w[r] * h(b, r);
      auto dw = grad->row(rel_f, rels[b]);
      for (std::size_t r = 0; r < rank; ++r) dw[r] += a[r] * h(b, r);
    }
    return loss;
  }

  // ComplEx. The lhs fiber is the rhs form with anchor = object and a conjugated
  // relation, so both sides share one derivation with sign = -1 on Im(W) for lhs.
  const Real sign = side == Side::rhs ? Real{1} : Real{-1};
  const Matrix& e_re = m.factor(0);
  const Matrix& e_im = m.factor(1);
  const Matrix& w_re = m.factor(2);
  const Matrix& w_im = m.factor(3);
  RowMat q_im(bsz, rank), h_im(bsz, rank);
  for (std::size_t b = 0; b < bsz; ++b) {
    const auto p = e_re.row(anchors[b]);
    const auto s = e_im.row(anchors[b]);
    const auto c = w_re.row(rels[b]);
    const auto d = w_im.row(rels[b]);
    for (std::size_t r = 0; r < rank; ++r) {
      const Real dd = sign * d[r];
      q(b, r) = p[r] * c[r] - s[r] * dd;
      q_im(b, r) = p[r] * dd + s[r] * c[r];
    }
  }
  view(grad->dense(0)).noalias() += gmat.transpose() * q;
  view(grad->dense(1)).noalias() += gmat.transpose() * q_im;
  h.noalias() = gmat * view(e_re);
  h_im.noalias() = gmat * view(e_im);
  for (std::size_t b = 0; b < bsz; ++b) {
    const auto p = e_re.row(anchors[b]);
    const auto s = e_im.row(anchors[b]);
    const auto c = w_re.row(rels[b]);
    const auto d = w_im.row(rels[b]);
    auto dp = grad->row(0, anchors[b]);
    auto ds = grad->row(1, anchors[b]);
    auto dc = grad->row(2, rels[b]);
    auto dd = grad->row(3, rels[b]);
    for (std::size_t r = 0; r < rank; ++r) {
      const Real dr = sign * d[r];
      const Real hre = h(b, r), him = h_im(b, r);
      dp[r] += hre * c[r] + him * dr;
      ds[r] += him * c[r] - hre * dr;
      dc[r] += hre * p[r] + him * s[r];
      dd[r] += sign * (him * p[r] - hre * s[r]);
    }
  }
  return loss;
}

}  // namespace

double rhs_fiber_loss_and_grad(const ModelParams& model, std::span<const Triple> batch, Gradients* grad) {
  return fiber_loss(model, batch, grad, Side::rhs);
}

double lhs_fiber_loss_and_grad(const ModelParams& model, std::span<const Triple> batch, Gradients* grad) {
  return fiber_loss(model, batch, grad, Side::lhs);
}

double standard_loss(const ModelParams& model, std::span<const Triple> batch, Gradients* grad) {
  const double rhs = rhs_fiber_loss_and_grad(model, batch, grad);
  const double lhs = lhs_fiber_loss_and_grad(model, batch, grad);
  return rhs + lhs;
}

double reciprocal_loss(const ModelParams& model, const TripleStore& augmented, std::span<const Triple> batch,
                       Gradients* grad) {
  if (!augmented.augmented()) throw ConfigError("reciprocal loss expects a reciprocal-augmented store");
  if (model.num_predicates() != augmented.num_predicates()) {
    throw DimensionError("model has " + std::to_string(model.num_predicates()) + " predicates but the augmented store has " +
                         std::to_string(augmented.num_predicates()));
  }
  return rhs_fiber_loss_and_grad(model, batch, grad);
}

}  // namespace kbc
