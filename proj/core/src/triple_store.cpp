#include "kbc/triple_store.hpp"

#include <fstream>
#include <unordered_set>

#include "binary_io.hpp"

namespace kbc {

namespace {

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = t.subject;
    h = h * 0x9E3779B97F4A7C15ull ^ t.predicate;
    h = h * 0x9E3779B97F4A7C15ull ^ t.object;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Splits a line on tabs into exactly three fields.
bool split_fields(std::string_view line, std::array<std::string_view, 3>& fields) {
  std::size_t start = 0;
  for (std::size_t f = 0; f < 3; ++f) {
    const std::size_t tab = line.find('\t', start);
    if (f < 2) {
      if (tab == std::string_view::npos) return false;
      fields[f] = line.substr(start, tab - start);
      start = tab + 1;
    } else {
      if (tab != std::string_view::npos) return false;
      fields[f] = line.substr(start);
    }
  }
  return true;
}

enum class VocabMode { build, fixed, extend };

LoadedTriples load_impl(const std::filesystem::path& path, Vocabularies vocab, VocabMode mode, Split split) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open triple file '" + path.string() + "'");

  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  auto resolve = [&](Vocabulary& v, std::string_view name, const char* kind) -> Index {
    if (mode == VocabMode::fixed) {
      if (auto idx = v.find(name)) return *idx;
      throw LookupError(path.string() + ":" + std::to_string(line_no) + ": unknown " + kind + " '" +
                        std::string(name) + "'");
    }
    return v.intern(name);
  };

  std::array<std::string_view, 3> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!split_fields(line, fields)) {
      throw ParseError(path.string() + ": expected 3 tab-separated fields", line_no);
    }
    Triple t;
    t.subject = resolve(vocab.entities, fields[0], "entity");
    t.predicate = resolve(vocab.predicates, fields[1], "predicate");
    t.object = resolve(vocab.entities, fields[2], "entity");
    triples.push_back(t);
  }
  TripleStore store(std::move(triples), vocab.entities.size(), vocab.predicates.size(), split);
  return {std::move(store), std::move(vocab)};
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
  }
  return "?";
}

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "valid") return Split::valid;
  if (name == "test") return Split::test;
  throw ConfigError("unknown split '" + std::string(name) + "' (expected train, valid or test)");
}

Vocabulary::Vocabulary(std::vector<std::string> names) {
  for (auto& n : names) {
    if (!index_.emplace(n, static_cast<Index>(names_.size())).second) {
      throw ParseError("duplicate vocabulary entry '" + n + "'");
    }
    names_.push_back(std::move(n));
  }
}

Index Vocabulary::intern(std::string_view name) {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  const auto idx = static_cast<Index>(names_.size());
  names_.emplace_back(name);
  index_.emplace(names_.back(), idx);
  return idx;
}

std::optional<Index> Vocabulary::find(std::string_view name) const {
  if (auto it = index_.find(name); it != index_.end()) return it->second;
  return std::nullopt;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocabulary '" + path.string() + "'");
  for (const auto& n : names_) out << n << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open vocabulary '" + path.string() + "'");
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) names.push_back(line);
  return Vocabulary(std::move(names));
}

TripleStore::TripleStore(std::vector<Triple> triples, std::size_t num_entities, std::size_t num_predicates,
                         Split split)
    : num_entities_(num_entities), num_predicates_(num_predicates), split_(split) {
  std::unordered_set<Triple, TripleHash> seen;
  seen.reserve(triples.size());
  triples_.reserve(triples.size());
  for (const auto& t : triples) {
    if (t.subject >= num_entities || t.object >= num_entities || t.predicate >= num_predicates) {
      throw DimensionError("triple (" + std::to_string(t.subject) + ", " + std::to_string(t.predicate) + ", " +
                           std::to_string(t.object) + ") out of range for N=" + std::to_string(num_entities) +
                           ", P=" + std::to_string(num_predicates));
    }
    if (seen.insert(t).second) {
      triples_.push_back(t);
    } else {
      ++duplicates_dropped_;
    }
  }
}

LoadedTriples load_triples(const std::filesystem::path& path, const Vocabularies* fixed, Split split) {
  if (fixed) return load_impl(path, *fixed, VocabMode::fixed, split);
  return load_impl(path, {}, VocabMode::build, split);
}

LoadedTriples load_triples_extending(const std::filesystem::path& path, Vocabularies base, Split split) {
  return load_impl(path, std::move(base), VocabMode::extend, split);
}

TripleStore augment_reciprocal(const TripleStore& store) {
  if (store.augmented()) throw ConfigError("store is already reciprocal-augmented");
  const auto p = static_cast<Index>(store.num_predicates());
  TripleStore out;
  out.triples_.reserve(2 * store.size());
  out.triples_.assign(store.triples().begin(), store.triples().end());
  for (const auto& t : store.triples()) out.triples_.push_back({t.object, t.predicate + p, t.subject});
  out.num_entities_ = store.num_entities();
  out.num_predicates_ = 2 * store.num_predicates();
  out.split_ = store.split();
  out.augmented_ = true;
  return out;
}

TripleStore flip_predicate(const TripleStore& store, Index predicate) {
  if (store.augmented()) throw ConfigError("flip_predicate expects a raw store");
  std::vector<Triple> flipped(store.triples().begin(), store.triples().end());
  for (auto& t : flipped) {
    if (t.predicate == predicate) std::swap(t.subject, t.object);
  }
  TripleStore out(std::move(flipped), store.num_entities(), store.num_predicates(), store.split());
  if (out.duplicates_dropped() != 0) throw ConfigError("flipping the predicate produced duplicate triples");
  return out;
}

void write_cache(const TripleStore& store, const std::filesystem::path& path) {
  if (store.augmented()) throw ConfigError("only raw stores are cached");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write cache '" + path.string() + "'");
  out.write("KBC1", 4);
  detail::write_le(out, static_cast<std::uint32_t>(store.num_entities()));
  detail::write_le(out, static_cast<std::uint32_t>(store.num_predicates()));
  detail::write_le(out, static_cast<std::uint64_t>(store.size()));
  for (const auto& t : store.triples()) {
    detail::write_le(out, std::uint32_t{t.subject});
    detail::write_le(out, std::uint32_t{t.predicate});
    detail::write_le(out, std::uint32_t{t.object});
  }
  if (!out) throw Error("failed writing cache '" + path.string() + "'");
}

TripleStore read_cache(const std::filesystem::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open cache '" + path.string() + "'");
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || std::string_view(magic.data(), 4) != "KBC1") {
    throw ParseError("'" + path.string() + "' is not a KBC1 cache");
  }
  const auto n = detail::read_le<std::uint32_t>(in);
  const auto p = detail::read_le<std::uint32_t>(in);
  const auto count = detail::read_le<std::uint64_t>(in);
  if (std::filesystem::file_size(path) != 20 + 12 * count) throw ParseError("cache size does not match its header");
  std::vector<Triple> triples(count);
  for (auto& t : triples) {
    t.subject = detail::read_le<std::uint32_t>(in);
    t.predicate = detail::read_le<std::uint32_t>(in);
    t.object = detail::read_le<std::uint32_t>(in);
  }
  return TripleStore(std::move(triples), n, p, split);
}

}  // namespace kbc
