#include "runner.hpp"

#include <chrono>
#include <cstdio>

#include "config_io.hpp"
#include "hashing.hpp"
#include "kbc/checkpoint.hpp"

namespace kbc::cli {

namespace fs = std::filesystem;

std::string config_hash(const TrainConfig& config, const PreparedData& data) {
  return sha256_hex(to_json(config).dump() + data.fingerprints()["caches"].dump()).substr(0, 16);
}

Json checkpoint_sidecar(const TrainConfig& config, const ModelParams& model, const PreparedData& data) {
  Json j;
  j["config"] = to_json(config);
  j["variant"] = std::string(to_string(model.variant()));
  j["formulation"] = std::string(to_string(config.formulation));
  j["num_entities"] = model.num_entities();
  j["num_predicates"] = model.num_predicates();
  j["rank"] = model.rank();
  j["precision"] = kRealIsDouble ? "double" : "single";
  j["data"] = data.fingerprints();
  return j;
}

Json run_training(const TrainConfig& config, const PreparedData& data, const fs::path& out_dir, std::ostream* progress) {
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point a, Clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };
  const auto t0 = Clock::now();
  const bool reciprocal = config.formulation == Formulation::reciprocal;
  const TripleStore train = reciprocal ? augment_reciprocal(data.train) : data.train;
  const FilterIndex filter = build_filter_index({&data.train, &data.valid, &data.test}, reciprocal);
  const auto t1 = Clock::now();

  FitOptions options;
  if (progress) {
    options.on_epoch = [&](const EpochRecord& e) {
      char line[160];
      std::snprintf(line, sizeof line, "epoch %zu/%zu  loss %.6g  %.2fs", e.epoch, config.epochs, e.loss, e.seconds);
      *progress << line;
      if (e.valid_mrr) {
        std::snprintf(line, sizeof line, "  valid MRR %.4f", *e.valid_mrr);
        *progress << line;
      }
      *progress << std::endl;
    };
  }
  const FitResult fitted = fit(config, train, &data.valid, &filter, options);
  const auto t2 = Clock::now();

  const EvalResult valid = evaluate(fitted.model, data.valid, filter, config.formulation);
  const EvalResult test = evaluate(fitted.model, data.test, filter, config.formulation);
  const auto t3 = Clock::now();

  fs::create_directories(out_dir);
  save_checkpoint(fitted.model, out_dir / "model.kbck");
  write_json(out_dir / "model.json", checkpoint_sidecar(config, fitted.model, data));
  write_text_atomic(out_dir / "history.csv", history_csv(fitted.history));
  write_json(out_dir / "history.json", to_json(fitted.history));

  Json record;
  record["status"] = "completed";
  record["config_hash"] = config_hash(config, data);
  record["config"] = to_json(config);
  record["data"] = {{"dir", fs::absolute(data.dir).lexically_normal().string()},
                    {"num_entities", data.train.num_entities()},
                    {"num_predicates", data.train.num_predicates()},
                    {"fingerprints", data.fingerprints()}};
  record["conventions"] = {{"batch_reduction", "sum"},
                           {"adagrad_epsilon", 1e-10},
                           {"tie_rule", "strict-greater"},
                           {"precision", kRealIsDouble ? "double" : "single"}};
  const auto& h = fitted.history;
  record["history"] = {{"epochs_run", h.epochs.size()},
                       {"best_epoch", h.best_epoch ? Json(*h.best_epoch) : Json(nullptr)},
                       {"best_valid_mrr", h.best_epoch ? Json(h.best_valid_mrr) : Json(nullptr)},
                       {"final_loss", h.epochs.empty() ? Json(nullptr) : Json(h.epochs.back().loss)}};
  record["valid"] = to_json(valid);
  record["test"] = to_json(test);
  record["timings"] = {{"setup_seconds", seconds(t0, t1)},
                       {"train_seconds", seconds(t1, t2)},
                       {"eval_seconds", seconds(t2, t3)}};
  write_json(out_dir / "run_record.json", record);
  return record;
}

}  // namespace kbc::cli
