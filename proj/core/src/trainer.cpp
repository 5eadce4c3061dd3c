#include "kbc/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "kbc/adagrad.hpp"
#include "kbc/losses.hpp"

namespace kbc {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_inputs(const TrainConfig& config, const TripleStore& train, const TripleStore* valid,
                  const FilterIndex* filter) {
  validate(config);
  if (train.empty()) throw ConfigError("training store is empty");
  const bool reciprocal = config.formulation == Formulation::reciprocal;
  if (reciprocal && !train.augmented()) throw ConfigError("reciprocal training needs a reciprocal-augmented store");
  if (!reciprocal && train.augmented()) throw ConfigError("standard training needs a raw store");
  if (valid && config.eval_every > 0) {
    if (!filter) throw ConfigError("validation needs a filter index");
    if (valid->num_entities() != train.num_entities() || valid->num_predicates() != train.base_predicates()) {
      throw DimensionError("validation store does not match the training store");
    }
  }
}

}  // namespace

std::vector<std::string> validation_errors(const TrainConfig& config) {
  std::vector<std::string> errors;
  if (config.model.rank < 1) errors.emplace_back("model.rank must be at least 1");
  if (!(config.model.init_scale > 0.0) || !std::isfinite(config.model.init_scale)) {
    errors.emplace_back("model.init_scale must be a positive finite number");
  }
  if (!(config.regularizer.lambda >= 0.0) || !std::isfinite(config.regularizer.lambda)) {
    errors.emplace_back("regularizer.lambda must be a nonnegative finite number");
  }
  if (config.batch_size < 1) errors.emplace_back("batch_size must be at least 1");
  if (config.epochs < 1) errors.emplace_back("epochs must be at least 1");
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    errors.emplace_back("learning_rate must be a positive finite number");
  }
  return errors;
}

void validate(const TrainConfig& config) {
  const auto errors = validation_errors(config);
  if (errors.empty()) return;
  std::string msg = "invalid training configuration:";
  for (const auto& e : errors) msg += "\n  - " + e;
  throw ConfigError(msg);
}

double compute_batch_objective(const TrainConfig& config, const ModelParams& model, const TripleStore& train,
                               std::span<const Triple> batch, const ModeMarginals* marginals, Gradients* grad) {
  const double loss = config.formulation == Formulation::reciprocal ? reciprocal_loss(model, train, batch, grad)
                                                                    : standard_loss(model, batch, grad);
  return loss + regularizer_penalty(config.regularizer, model, batch, marginals, grad);
}

std::vector<std::size_t> epoch_order(const TripleStore& train, std::uint64_t seed, std::size_t epoch) {
  const std::size_t n = train.size();
  const std::size_t originals = train.augmented() ? n / 2 : n;
  const std::uint64_t base = splitmix(splitmix(seed) ^ (0x632be59bd9b4e019ULL * (epoch + 1)));
  std::vector<std::uint64_t> keys(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    keys[pos] = splitmix(splitmix(base ^ (pos % originals)) ^ train[pos].subject);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
  });
  return order;
}

FitResult fit(const TrainConfig& config, const TripleStore& train, const TripleStore* valid, const FilterIndex* filter,
              const FitOptions& options) {
  check_inputs(config, train, valid, filter);
  using Clock = std::chrono::steady_clock;

  FitResult result;
  if (options.initial) {
    const ModelParams& init = *options.initial;
    if (init.variant() != config.model.variant || init.rank() != config.model.rank ||
        init.num_entities() != train.num_entities() || init.num_predicates() != train.num_predicates()) {
      throw DimensionError("initial parameters do not match the configuration and training store");
    }
    result.model = init;
  } else {
    result.model = init_model(config.model, train.num_entities(), train.num_predicates());
  }
  ModelParams& model = result.model;

  std::optional<ModeMarginals> marginals;
  if (config.regularizer.variant == RegularizerVariant::n2_weighted) marginals = compute_marginals(train);

  Adagrad optimizer(model, config.learning_rate);
  Gradients grad(model);
  std::vector<Triple> batch;
  batch.reserve(config.batch_size);
  const bool validating = valid != nullptr && config.eval_every > 0;
  std::optional<ModelParams> best;
  EvalOptions eval_options;
  eval_options.max_triples = config.valid_cap;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = Clock::now();
    const auto order = epoch_order(train, config.seed, epoch);
    double epoch_loss = 0.0;
    for (std::size_t b0 = 0, bi = 0; b0 < order.size(); b0 += config.batch_size, ++bi) {
      const std::size_t b1 = std::min(order.size(), b0 + config.batch_size);
      batch.clear();
      for (std::size_t p = b0; p < b1; ++p) batch.push_back(train[order[p]]);
      grad.clear();
      const double obj =
          compute_batch_objective(config, model, train, batch, marginals ? &*marginals : nullptr, &grad);
      if (!std::isfinite(obj)) {
        throw DivergenceError("non-finite objective at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(bi + 1) + " (lower the learning rate or raise lambda)");
      }
      optimizer.step(model, grad);
      epoch_loss += obj;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = epoch_loss;
    if (validating && (epoch % config.eval_every == 0 || epoch == config.epochs)) {
      const double mrr = evaluate(model, *valid, *filter, config.formulation, eval_options).mrr;
      rec.valid_mrr = mrr;
      if (!result.history.best_epoch || mrr > result.history.best_valid_mrr) {
        result.history.best_epoch = epoch;
        result.history.best_valid_mrr = mrr;
        best = model;
      }
    }
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.history.epochs.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);
  }
  if (best) model = std::move(*best);
  return result;
}

}  // namespace kbc
