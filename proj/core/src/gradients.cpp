#include "kbc/gradients.hpp"

namespace kbc {

Gradients::Gradients(const ModelParams& like) {
  for (const auto& f : like.factors()) {
    values_.emplace_back(f.rows(), f.cols());
    Tracking t;
    t.marked.assign(f.rows(), 0);
    factors_.push_back(std::move(t));
  }
}

std::span<Real> Gradients::row(std::size_t f, Index i) {
  auto& t = factors_.at(f);
  if (!t.dense && !t.marked.at(i)) {
    t.marked[i] = 1;
    t.rows.push_back(i);
  }
  return values_[f].row(i);
}

Matrix& Gradients::dense(std::size_t f) {
  factors_.at(f).dense = true;
  return values_[f];
}

void Gradients::clear() {
  for (std::size_t f = 0; f < values_.size(); ++f) {
    auto& t = factors_[f];
    if (t.dense) {
      values_[f].fill(Real{0});
    } else {
      for (Index i : t.rows) {
        auto r = values_[f].row(i);
        std::fill(r.begin(), r.end(), Real{0});
      }
    }
    for (Index i : t.rows) t.marked[i] = 0;
    t.rows.clear();
    t.dense = false;
  }
}

}  // namespace kbc
