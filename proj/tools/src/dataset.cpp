#include "dataset.hpp"

#include <string>

#include "config_io.hpp"
#include "hashing.hpp"

namespace kbc::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kManifestFormat = 1;
constexpr Split kSplits[] = {Split::train, Split::valid, Split::test};

std::string cache_name(Split s) { return std::string(to_string(s)) + ".kbc"; }

bool manifest_matches(const fs::path& out, const Json& inputs, bool extend_vocab) {
  const fs::path path = out / "manifest.json";
  if (!fs::exists(path)) return false;
  Json m;
  try {
    m = read_config_file(path);
  } catch (const Error&) {
    return false;
  }
  if (m.value("format", 0) != kManifestFormat || m.value("inputs", Json()) != inputs ||
      m.value("extend_vocab", !extend_vocab) != extend_vocab) {
    return false;
  }
  for (Split s : kSplits) {
    const fs::path cache = out / cache_name(s);
    if (!fs::exists(cache) || sha256_file(cache) != m["splits"][std::string(to_string(s))].value("sha256", "")) {
      return false;
    }
  }
  return fs::exists(out / "entities.txt") && fs::exists(out / "predicates.txt");
}

}  // namespace

PrepareOutcome prepare_data(const PrepareOptions& options) {
  std::string missing;
  for (const char* name : kSplitFiles) {
    if (!fs::is_regular_file(options.input / name)) missing += std::string(missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) {
    throw ConfigError("'" + options.input.string() + "' is missing " + missing +
                      " (expected train.txt, valid.txt and test.txt)");
  }

  Json inputs = Json::object();
  for (const char* name : kSplitFiles) inputs[name] = sha256_file(options.input / name);
  if (manifest_matches(options.output, inputs, options.extend_vocab)) {
    return {true, read_config_file(options.output / "manifest.json")};
  }

  auto with_context = [](const fs::path& file, auto&& fn) {
    try {
      return fn();
    } catch (const ParseError& e) {
      throw ParseError(file.string() + ": " + e.what());
    } catch (const LookupError& e) {
      throw LookupError(file.string() + ": " + e.what() +
                        " (rerun with --extend-vocab to append unseen names to the vocabulary)");
    }
  };
  const fs::path train_path = options.input / "train.txt";
  LoadedTriples train = with_context(train_path, [&] { return load_triples(train_path, nullptr, Split::train); });
  LoadedTriples valid, test;
  Vocabularies vocab = train.vocab;
  for (Split s : {Split::valid, Split::test}) {
    const fs::path path = options.input / (std::string(to_string(s)) + ".txt");
    LoadedTriples loaded = with_context(path, [&] {
      return options.extend_vocab ? load_triples_extending(path, vocab, s) : load_triples(path, &vocab, s);
    });
    vocab = loaded.vocab;
    (s == Split::valid ? valid : test) = std::move(loaded);
  }
  // Stores must share N and P; earlier splits are re-dimensioned to the final vocabulary.
  const std::size_t n = vocab.entities.size(), p = vocab.predicates.size();
  auto resize = [&](const TripleStore& st, Split s) {
    return TripleStore(std::vector<Triple>(st.triples().begin(), st.triples().end()), n, p, s);
  };
  const TripleStore stores[] = {resize(train.store, Split::train), resize(valid.store, Split::valid),
                                resize(test.store, Split::test)};
  const std::size_t dropped[] = {train.store.duplicates_dropped(), valid.store.duplicates_dropped(),
                                 test.store.duplicates_dropped()};

  fs::create_directories(options.output);
  Json manifest;
  manifest["format"] = kManifestFormat;
  manifest["inputs"] = inputs;
  manifest["extend_vocab"] = options.extend_vocab;
  manifest["num_entities"] = n;
  manifest["num_predicates"] = p;
  manifest["train_entities"] = train.vocab.entities.size();
  Json splits = Json::object();
  for (int i = 0; i < 3; ++i) {
    const Split s = kSplits[i];
    const fs::path cache = options.output / cache_name(s);
    write_cache(stores[i], cache);
    splits[std::string(to_string(s))] = {{"triples", stores[i].size()},
                                         {"duplicates_dropped", dropped[i]},
                                         {"cache", cache_name(s)},
                                         {"sha256", sha256_file(cache)}};
  }
  manifest["splits"] = splits;
  vocab.entities.save(options.output / "entities.txt");
  vocab.predicates.save(options.output / "predicates.txt");
  write_json(options.output / "manifest.json", manifest);
  return {false, manifest};
}

const TripleStore& PreparedData::split(Split s) const {
  switch (s) {
    case Split::train: return train;
    case Split::valid: return valid;
    case Split::test: return test;
  }
  return test;
}

Json PreparedData::fingerprints() const {
  Json f;
  f["inputs"] = manifest.value("inputs", Json::object());
  Json caches = Json::object();
  for (Split s : kSplits) caches[std::string(to_string(s))] = manifest["splits"][std::string(to_string(s))]["sha256"];
  f["caches"] = caches;
  return f;
}

PreparedData load_prepared(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw ConfigError("'" + dir.string() + "' has no manifest.json; run prepare-data first");
  }
  PreparedData d;
  d.dir = dir;
  d.manifest = read_config_file(manifest_path);
  for (Split s : kSplits) {
    const std::string name(to_string(s));
    if (!d.manifest.contains("splits") || !d.manifest["splits"].contains(name)) {
      throw ConfigError("manifest in '" + dir.string() + "' lacks the " + name + " split");
    }
    const fs::path cache = dir / d.manifest["splits"][name].value("cache", cache_name(s));
    if (sha256_file(cache) != d.manifest["splits"][name].value("sha256", "")) {
      throw ConfigError("'" + cache.string() + "' does not match its manifest hash; rerun prepare-data");
    }
    TripleStore st = read_cache(cache, s);
    if (s == Split::train) d.train = std::move(st);
    if (s == Split::valid) d.valid = std::move(st);
    if (s == Split::test) d.test = std::move(st);
  }
  d.vocab.entities = Vocabulary::load(dir / "entities.txt");
  d.vocab.predicates = Vocabulary::load(dir / "predicates.txt");
  if (d.vocab.entities.size() != d.train.num_entities() || d.vocab.predicates.size() != d.train.num_predicates()) {
    throw DimensionError("vocabulary files do not match the cached stores in '" + dir.string() + "'");
  }
  return d;
}

}  // namespace kbc::cli
