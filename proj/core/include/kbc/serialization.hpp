#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbc/eval.hpp"
#include "kbc/trainer.hpp"

namespace kbc {

using Json = nlohmann::ordered_json;

/// {"model": {variant, rank, init_scale, seed}, formulation, "regularizer": {variant, lambda},
///  batch_size, epochs, eval_every, learning_rate, seed, valid_cap}
Json to_json(const TrainConfig& config);

/// Missing keys keep their defaults. Unknown keys, wrong types and invalid values are all
/// collected into `errors`; the returned config is meaningful only if none were added.
TrainConfig train_config_from_json(const Json& j, std::vector<std::string>& errors);

/// Throws ConfigError listing every problem.
TrainConfig train_config_from_json(const Json& j);

/// {mrr, hits1, hits3, hits10, n_queries, breakdown}
Json to_json(const EvalResult& result);

Json to_json(const TrainHistory& history);

/// "epoch,loss,valid_mrr" with an empty field when the epoch was not validated.
std::string history_csv(const TrainHistory& history);

/// Aligned two-column table of the metrics (and the breakdown when present).
std::string format_eval_table(const EvalResult& result);

}  // namespace kbc
