#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "dataset.hpp"
#include "kbc/serialization.hpp"

namespace kbc::cli {

/// Directory name of a run: config plus data fingerprint.
std::string config_hash(const TrainConfig& config, const PreparedData& data);

/// Trains, evaluates the best checkpoint on valid and test, and writes into `out_dir`:
/// model.kbck, model.json, history.csv, history.json and run_record.json (last).
/// Returns the run record. `progress` receives one line per epoch when non-null.
Json run_training(const TrainConfig& config, const PreparedData& data, const std::filesystem::path& out_dir,
                  std::ostream* progress);

/// Sidecar written next to a checkpoint.
Json checkpoint_sidecar(const TrainConfig& config, const ModelParams& model, const PreparedData& data);

}  // namespace kbc::cli
