#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kbc/serialization.hpp"

namespace kbc::cli {

/// Candidate values per hyperparameter; an axis left empty keeps the base value.
struct GridSpec {
  TrainConfig base;
  std::vector<double> learning_rate;
  std::vector<std::size_t> batch_size;
  std::vector<double> lambda;
  std::vector<RegularizerVariant> regularizer;
  std::vector<Formulation> formulation;
  std::vector<std::size_t> rank;
  std::vector<ModelVariant> model;
  std::optional<std::filesystem::path> data;
  std::optional<std::filesystem::path> output;

  std::size_t size() const;
  /// Cartesian product, model varying slowest and batch size fastest.
  std::vector<TrainConfig> expand() const;
};

/// Keys: data, output, base (a training config) and grid with the lists learning_rate,
/// batch_size, lambda, regularizer, formulation, rank and model. Relative paths resolve
/// against `origin`. Throws ConfigError listing every problem.
GridSpec parse_grid_spec(const Json& j, const std::filesystem::path& origin);

}  // namespace kbc::cli
