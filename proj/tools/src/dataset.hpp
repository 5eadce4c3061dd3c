#pragma once

#include <filesystem>

#include "kbc/serialization.hpp"
#include "kbc/triple_store.hpp"

namespace kbc::cli {

inline constexpr const char* kSplitFiles[] = {"train.txt", "valid.txt", "test.txt"};

struct PrepareOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  /// Append entities or predicates first seen in valid/test instead of rejecting them.
  bool extend_vocab = false;
};

struct PrepareOutcome {
  bool reused = false;
  Json manifest;
};

/// Parses train/valid/test, writes binary caches, vocabularies and manifest.json.
/// A rerun on unchanged inputs with the same options reuses the existing output.
PrepareOutcome prepare_data(const PrepareOptions& options);

struct PreparedData {
  std::filesystem::path dir;
  TripleStore train;
  TripleStore valid;
  TripleStore test;
  Vocabularies vocab;
  Json manifest;

  const TripleStore& split(Split s) const;
  /// Input and cache hashes, recorded with every run.
  Json fingerprints() const;
};

/// Loads a prepare-data output directory, checking cache hashes against the manifest.
PreparedData load_prepared(const std::filesystem::path& dir);

}  // namespace kbc::cli
