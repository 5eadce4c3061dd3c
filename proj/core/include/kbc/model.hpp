#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kbc/types.hpp"

namespace kbc {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Real fill = Real{0}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  Real* data() noexcept { return data_.data(); }
  const Real* data() const noexcept { return data_.data(); }
  std::span<Real> values() noexcept { return data_; }
  std::span<const Real> values() const noexcept { return data_; }

  std::span<Real> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const Real> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

  Real& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  Real operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  void fill(Real value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

enum class ModelVariant : std::uint8_t { cp = 0, complex = 1, distmult = 2 };

std::string_view to_string(ModelVariant variant);
ModelVariant model_variant_from_string(std::string_view name);

struct ModelConfig {
  ModelVariant variant = ModelVariant::cp;
  std::size_t rank = 1;
  double init_scale = 1e-3;
  std::uint64_t seed = 0;
};

/// Factor matrices of a CP, ComplEx or DistMult model.
///
/// Factor layout by variant:
///  - CP:       0 subject U1 (N x R), 1 predicate U2 (P x R), 2 object U3 (N x R)
///  - DistMult: 0 entity E (N x R), 1 predicate W (P x R)
///  - ComplEx:  0 Re(E), 1 Im(E) (N x R), 2 Re(W), 3 Im(W) (P x R)
class ModelParams {
 public:
  ModelParams() = default;
  ModelParams(ModelVariant variant, std::size_t num_entities, std::size_t num_predicates, std::size_t rank);

  ModelVariant variant() const noexcept { return variant_; }
  std::size_t rank() const noexcept { return rank_; }
  std::size_t num_entities() const noexcept { return num_entities_; }
  std::size_t num_predicates() const noexcept { return num_predicates_; }

  std::vector<Matrix>& factors() noexcept { return factors_; }
  const std::vector<Matrix>& factors() const noexcept { return factors_; }
  Matrix& factor(std::size_t f) { return factors_.at(f); }
  const Matrix& factor(std::size_t f) const { return factors_.at(f); }

  /// Index of the factor holding subject rows (real plane for ComplEx).
  std::size_t subject_factor() const noexcept { return 0; }
  std::size_t object_factor() const noexcept { return variant_ == ModelVariant::cp ? 2 : 0; }
  std::size_t predicate_factor() const noexcept { return variant_ == ModelVariant::complex ? 2 : 1; }

  /// Swaps two predicate rows in every predicate factor.
  void swap_predicate_rows(Index a, Index b);

  bool all_finite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelVariant variant_ = ModelVariant::cp;
  std::size_t num_entities_ = 0;
  std::size_t num_predicates_ = 0;
  std::size_t rank_ = 0;
  std::vector<Matrix> factors_;
};

/// Names of the factors, in factor order.
std::vector<std::string_view> factor_names(ModelVariant variant);
/// Whether factor `f` is indexed by entities (as opposed to predicates).
bool is_entity_factor(ModelVariant variant, std::size_t f);

void validate(const ModelConfig& config);

/// I.i.d. N(0, init_scale^2) entries, deterministic in the seed.
ModelParams init_model(const ModelConfig& config, std::size_t num_entities, std::size_t num_predicates);

/// Score of (i, j, k). Per-rank terms are accumulated sequentially over r:
///   CP        U2[j,r] * (U1[i,r] * U3[k,r])
///   DistMult  W[j,r]  * (E[i,r]  * E[k,r])
///   ComplEx   Re(W)[j,r] * (a x + b y) + Im(W)[j,r] * (a y - b x)
/// with a + ib = E[i,r] and x + iy = E[k,r]. The fiber kernels use the same expressions,
/// so fiber entries are bit-identical to score_triple.
Real score_triple(const ModelParams& model, Index i, Index j, Index k);

/// Scores X[i, j, :] over all objects.
std::vector<Real> score_rhs_fiber(const ModelParams& model, Index i, Index j);
/// Scores X[:, j, k] over all subjects.
std::vector<Real> score_lhs_fiber(const ModelParams& model, Index j, Index k);

/// Row b holds score_rhs_fiber(pairs[b].first, pairs[b].second); result is (batch x N).
Matrix batch_score_rhs(const ModelParams& model, std::span<const std::pair<Index, Index>> pairs);
/// Row b holds score_lhs_fiber(pairs[b].first, pairs[b].second) for (predicate, object) pairs.
Matrix batch_score_lhs(const ModelParams& model, std::span<const std::pair<Index, Index>> pairs);

}  // namespace kbc
