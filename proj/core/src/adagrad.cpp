#include "kbc/adagrad.hpp"

#include <cmath>

namespace kbc {

Adagrad::Adagrad(const ModelParams& like, double learning_rate, double epsilon)
    : learning_rate_(learning_rate), epsilon_(epsilon) {
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("Adagrad epsilon must be positive");
  for (const auto& f : like.factors()) accumulators_.emplace_back(f.rows(), f.cols());
}

void Adagrad::step(ModelParams& model, const Gradients& grad) {
  if (grad.num_factors() != model.factors().size() || accumulators_.size() != model.factors().size()) {
    throw DimensionError("gradient / optimizer state do not match the model");
  }
  for (std::size_t f = 0; f < model.factors().size(); ++f) {
    Matrix& param = model.factor(f);
    Matrix& acc = accumulators_[f];
    const Matrix& g = grad.values(f);
    if (g.rows() != param.rows() || g.cols() != param.cols() || acc.rows() != param.rows()) {
      throw DimensionError("gradient shape mismatch in factor " + std::to_string(f));
    }
    auto update_row = [&](std::size_t i) {
      auto p = param.row(i);
      auto a = acc.row(i);
      const auto gr = g.row(i);
      for (std::size_t r = 0; r < p.size(); ++r) {
        const double gv = gr[r];
        a[r] += static_cast<Real>(gv * gv);
        p[r] -= static_cast<Real>(learning_rate_ * gv / (std::sqrt(static_cast<double>(a[r])) + epsilon_));
      }
    };
    if (grad.is_dense(f)) {
      for (std::size_t i = 0; i < param.rows(); ++i) update_row(i);
    } else {
      for (Index i : grad.touched_rows(f)) update_row(i);
    }
  }
}

void Adagrad::swap_predicate_rows(ModelVariant variant, Index a, Index b) {
  for (std::size_t f = 0; f < accumulators_.size(); ++f) {
    if (is_entity_factor(variant, f)) continue;
    auto ra = accumulators_[f].row(a);
    auto rb = accumulators_[f].row(b);
    std::swap_ranges(ra.begin(), ra.end(), rb.begin());
  }
}

}  // namespace kbc
