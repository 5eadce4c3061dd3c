#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kbc/types.hpp"

namespace kbc {

struct Triple {
  Index subject = 0;
  Index predicate = 0;
  Index object = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class Split { train, valid, test };

std::string_view to_string(Split split);
Split split_from_string(std::string_view name);

/// Dense string <-> index bijection. Indices are assigned in first-insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  /// Returns the index of `name`, inserting it if absent.
  Index intern(std::string_view name);
  std::optional<Index> find(std::string_view name) const;
  const std::string& name(Index index) const { return names_.at(index); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.names_ == b.names_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index, Hash, std::equal_to<>> index_;
};

struct Vocabularies {
  Vocabulary entities;
  Vocabulary predicates;
};

/// An indexed list of distinct triples over N entities and P predicates.
///
/// A reciprocal-augmented store holds 2P predicates: the first |S|/2 triples are the
/// originals in input order, followed by (k, j + P, i) for each original (i, j, k).
class TripleStore {
 public:
  TripleStore() = default;
  TripleStore(std::vector<Triple> triples, std::size_t num_entities, std::size_t num_predicates,
              Split split = Split::train);

  std::span<const Triple> triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::size_t num_entities() const noexcept { return num_entities_; }
  std::size_t num_predicates() const noexcept { return num_predicates_; }
  Split split() const noexcept { return split_; }
  bool augmented() const noexcept { return augmented_; }
  /// P before augmentation (equal to num_predicates() for raw stores).
  std::size_t base_predicates() const noexcept { return augmented_ ? num_predicates_ / 2 : num_predicates_; }
  /// Number of duplicate input lines dropped at construction.
  std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

  const Triple& operator[](std::size_t i) const { return triples_[i]; }

 private:
  friend TripleStore augment_reciprocal(const TripleStore& store);

  std::vector<Triple> triples_;
  std::size_t num_entities_ = 0;
  std::size_t num_predicates_ = 0;
  Split split_ = Split::train;
  bool augmented_ = false;
  std::size_t duplicates_dropped_ = 0;
};

struct LoadedTriples {
  TripleStore store;
  Vocabularies vocab;
};

/// Reads `subject<TAB>predicate<TAB>object` lines.
///
/// Without `fixed`, vocabularies are built in first-appearance order. With `fixed`,
/// every string must already be known; an unknown one raises LookupError.
LoadedTriples load_triples(const std::filesystem::path& path, const Vocabularies* fixed = nullptr,
                           Split split = Split::train);

/// Like load_triples with a base vocabulary, but unseen strings are appended to it.
LoadedTriples load_triples_extending(const std::filesystem::path& path, Vocabularies base,
                                     Split split = Split::train);

/// Mode-2 concatenation of the store with its reciprocal: (i,j,k) -> (k, j+P, i).
/// Rejects an already augmented store.
TripleStore augment_reciprocal(const TripleStore& store);

/// Returns the store with every triple of `predicate` reversed, (i,j,k) -> (k,j,i),
/// keeping positions. Duplicates created by the flip are rejected.
TripleStore flip_predicate(const TripleStore& store, Index predicate);

/// Binary cache: "KBC1", u32 N, u32 P, u64 count, count x (u32, u32, u32), little-endian.
void write_cache(const TripleStore& store, const std::filesystem::path& path);
TripleStore read_cache(const std::filesystem::path& path, Split split = Split::train);

}  // namespace kbc
