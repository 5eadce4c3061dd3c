#pragma once

#include <vector>

#include "kbc/gradients.hpp"
#include "kbc/model.hpp"

namespace kbc {

/// Adagrad with per-coordinate squared-gradient accumulators (starting at zero).
///
/// step(): acc += g^2; theta -= lr * g / (sqrt(acc) + eps), applied to touched rows only.
class Adagrad {
 public:
  Adagrad() = default;
  Adagrad(const ModelParams& like, double learning_rate, double epsilon = 1e-10);

  void step(ModelParams& model, const Gradients& grad);

  double learning_rate() const noexcept { return learning_rate_; }
  double epsilon() const noexcept { return epsilon_; }
  const Matrix& accumulator(std::size_t f) const { return accumulators_.at(f); }
  void swap_predicate_rows(ModelVariant variant, Index a, Index b);

 private:
  double learning_rate_ = 0.1;
  double epsilon_ = 1e-10;
  std::vector<Matrix> accumulators_;
};

}  // namespace kbc
