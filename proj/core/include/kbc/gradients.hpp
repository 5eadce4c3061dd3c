#pragma once

#include <span>
#include <vector>

#include "kbc/model.hpp"

namespace kbc {

/// Gradient buffers shaped like a ModelParams, with per-factor tracking of the rows
/// that received a contribution. Factors marked dense are treated as fully touched.
class Gradients {
 public:
  Gradients() = default;
  explicit Gradients(const ModelParams& like);

  std::size_t num_factors() const noexcept { return values_.size(); }
  Matrix& values(std::size_t f) { return values_.at(f); }
  const Matrix& values(std::size_t f) const { return values_.at(f); }

  /// Marks row `i` of factor `f` as touched and returns it for accumulation.
  std::span<Real> row(std::size_t f, Index i);
  /// Marks every row of factor `f` as touched.
  Matrix& dense(std::size_t f);

  bool is_dense(std::size_t f) const { return factors_.at(f).dense; }
  std::span<const Index> touched_rows(std::size_t f) const { return factors_.at(f).rows; }

  /// Zeroes touched rows and forgets the touch marks.
  void clear();

 private:
  struct Tracking {
    bool dense = false;
    std::vector<unsigned char> marked;
    std::vector<Index> rows;
  };
  std::vector<Matrix> values_;
  std::vector<Tracking> factors_;
};

}  // namespace kbc
