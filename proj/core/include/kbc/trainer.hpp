#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kbc/eval.hpp"
#include "kbc/filter_index.hpp"
#include "kbc/gradients.hpp"
#include "kbc/model.hpp"
#include "kbc/regularizers.hpp"
#include "kbc/statistics.hpp"
#include "kbc/triple_store.hpp"

namespace kbc {

struct TrainConfig {
  ModelConfig model;
  Formulation formulation = Formulation::reciprocal;
  RegularizerConfig regularizer;
  std::size_t batch_size = 100;
  std::size_t epochs = 100;
  /// Validation period in epochs; 0 disables validation.
  std::size_t eval_every = 5;
  double learning_rate = 0.1;
  /// Shuffle seed (initialization uses model.seed).
  std::uint64_t seed = 0;
  /// Validation triples evaluated per checkpoint; 0 means all.
  std::size_t valid_cap = 0;
};

/// Every problem with the configuration, in a fixed order. Empty when valid.
std::vector<std::string> validation_errors(const TrainConfig& config);
/// Throws ConfigError listing every problem.
void validate(const TrainConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  /// Sum over the epoch's minibatches of loss + penalty.
  double loss = 0;
  std::optional<double> valid_mrr;
  double seconds = 0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  /// Epoch of the returned parameters when validation ran.
  std::optional<std::size_t> best_epoch;
  double best_valid_mrr = 0;
};

struct FitResult {
  ModelParams model;
  TrainHistory history;
};

struct FitOptions {
  /// Starting point instead of init_model(config.model, ...).
  const ModelParams* initial = nullptr;
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Loss plus penalty of one minibatch; accumulates the gradient into `grad` if given.
/// `train` is the store the batch was drawn from (augmented for the reciprocal formulation).
double compute_batch_objective(const TrainConfig& config, const ModelParams& model, const TripleStore& train,
                               std::span<const Triple> batch, const ModeMarginals* marginals, Gradients* grad);

/// Order in which an epoch visits the training triples.
///
/// Positions are sorted by a seeded hash of (epoch, originating triple, subject), so a
/// triple and its reciprocal image land independently, and flipping the stored orientation
/// of a predicate permutes nothing but the roles of j and j + P.
std::vector<std::size_t> epoch_order(const TripleStore& train, std::uint64_t seed, std::size_t epoch);

/// Minibatch Adagrad on loss + penalty with periodic validation.
///
/// Standard formulation expects a raw train store; reciprocal expects an augmented one and
/// a reciprocal filter index. Returns the parameters with the highest validation MRR (the
/// earliest on ties), or the final ones when validation never ran.
FitResult fit(const TrainConfig& config, const TripleStore& train, const TripleStore* valid, const FilterIndex* filter,
              const FitOptions& options = {});

}  // namespace kbc
