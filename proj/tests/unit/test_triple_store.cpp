#include <gtest/gtest.h>

#include <fstream>

#include "kbc/triple_store.hpp"
#include "kbc_test_support.hpp"

using namespace kbc;
using kbc::testing::scratch_dir;
using kbc::testing::write_file;

TEST(TripleStore, ToyFileBuildsVocabularyInFileOrder) {
  auto dir = scratch_dir("toy_load");
  write_file(dir / "t.txt", "a\tr\tb\nb\tr\ta\na\tr\ta\n");
  auto loaded = load_triples(dir / "t.txt");
  EXPECT_EQ(loaded.store.num_entities(), 2u);
  EXPECT_EQ(loaded.store.num_predicates(), 1u);
  ASSERT_EQ(loaded.store.size(), 3u);
  EXPECT_EQ(loaded.store[0], (Triple{0, 0, 1}));
  EXPECT_EQ(loaded.store[1], (Triple{1, 0, 0}));
  EXPECT_EQ(loaded.store[2], (Triple{0, 0, 0}));
  EXPECT_EQ(loaded.vocab.entities.name(1), "b");
}

TEST(TripleStore, EmptyFileWithFixedVocabularyKeepsDimensions) {
  auto dir = scratch_dir("empty_fixed");
  write_file(dir / "t.txt", "a\tr\tb\nc\ts\ta\n");
  write_file(dir / "e.txt", "");
  auto base = load_triples(dir / "t.txt");
  auto empty = load_triples(dir / "e.txt", &base.vocab, Split::test);
  EXPECT_TRUE(empty.store.empty());
  EXPECT_EQ(empty.store.num_entities(), 3u);
  EXPECT_EQ(empty.store.num_predicates(), 2u);
  EXPECT_EQ(empty.store.split(), Split::test);
}

TEST(TripleStore, MalformedLineReportsLineNumber) {
  auto dir = scratch_dir("malformed");
  write_file(dir / "t.txt", "a\tr\tb\na\tr\n");
  try {
    load_triples(dir / "t.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  write_file(dir / "u.txt", "a\tr\tb\tc\n");
  EXPECT_THROW(load_triples(dir / "u.txt"), ParseError);
}

TEST(TripleStore, UnknownStringUnderFixedVocabulary) {
  auto dir = scratch_dir("unknown");
  write_file(dir / "t.txt", "a\tr\tb\n");
  write_file(dir / "v.txt", "a\tr\tz\n");
  auto base = load_triples(dir / "t.txt");
  EXPECT_THROW(load_triples(dir / "v.txt", &base.vocab), LookupError);
  auto extended = load_triples_extending(dir / "v.txt", base.vocab);
  EXPECT_EQ(extended.store.num_entities(), 3u);
  EXPECT_EQ(extended.vocab.entities.name(2), "z");
}

TEST(TripleStore, DuplicatesAreDroppedAndCounted) {
  TripleStore s({{0, 0, 1}, {0, 0, 1}, {1, 0, 0}}, 2, 1);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.duplicates_dropped(), 1u);
}

TEST(TripleStore, OutOfRangeIndexRejected) {
  EXPECT_THROW(TripleStore({{0, 0, 2}}, 2, 1), DimensionError);
  EXPECT_THROW(TripleStore({{0, 1, 0}}, 2, 1), DimensionError);
}

TEST(Vocabulary, BijectionAndRoundTrip) {
  Vocabulary v;
  EXPECT_EQ(v.intern("x"), 0u);
  EXPECT_EQ(v.intern("y"), 1u);
  EXPECT_EQ(v.intern("x"), 0u);
  for (Index i = 0; i < v.size(); ++i) EXPECT_EQ(*v.find(v.name(i)), i);
  EXPECT_FALSE(v.find("w"));
  auto dir = scratch_dir("vocab");
  v.save(dir / "v.txt");
  EXPECT_EQ(Vocabulary::load(dir / "v.txt"), v);
}

TEST(Augment, SingleTriple) {
  TripleStore s({{0, 0, 1}}, 2, 1);
  auto a = augment_reciprocal(s);
  EXPECT_TRUE(a.augmented());
  EXPECT_EQ(a.num_predicates(), 2u);
  EXPECT_EQ(a.base_predicates(), 1u);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], (Triple{0, 0, 1}));
  EXPECT_EQ(a[1], (Triple{1, 1, 0}));
}

TEST(Augment, TwiceIsRejected) {
  auto a = augment_reciprocal(TripleStore({{0, 0, 1}}, 2, 1));
  EXPECT_THROW(augment_reciprocal(a), ConfigError);
}

TEST(Augment, ReciprocalSlicesAreTransposes) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = kbc::testing::random_store(60, 9, 3, seed);
    auto a = augment_reciprocal(s);
    ASSERT_EQ(a.size(), 2 * s.size());
    const std::size_t p = s.num_predicates();
    for (std::size_t n = 0; n < s.size(); ++n) {
      const Triple& t = s[n];
      EXPECT_EQ(a[n], t);
      const Triple& r = a[s.size() + n];
      EXPECT_EQ(r, (Triple{t.object, static_cast<Index>(t.predicate + p), t.subject}));
      // Flipping the reciprocal image back recovers the original.
      EXPECT_EQ((Triple{r.object, static_cast<Index>(r.predicate - p), r.subject}), t);
    }
  }
}

TEST(FlipPredicate, ReversesOnlyThatPredicate) {
  TripleStore s({{0, 0, 1}, {1, 1, 2}, {2, 0, 0}}, 3, 2);
  auto f = flip_predicate(s, 0);
  EXPECT_EQ(f[0], (Triple{1, 0, 0}));
  EXPECT_EQ(f[1], (Triple{1, 1, 2}));
  EXPECT_EQ(f[2], (Triple{0, 0, 2}));
  EXPECT_EQ(flip_predicate(f, 0)[0], s[0]);
}

TEST(Cache, RoundTripAndCorruption) {
  auto dir = scratch_dir("cache");
  auto s = kbc::testing::random_store(50, 10, 3, 4, Split::valid);
  write_cache(s, dir / "s.kbc");
  auto r = read_cache(dir / "s.kbc", Split::valid);
  EXPECT_EQ(r.num_entities(), s.num_entities());
  EXPECT_EQ(r.num_predicates(), s.num_predicates());
  ASSERT_EQ(r.size(), s.size());
  for (std::size_t n = 0; n < s.size(); ++n) EXPECT_EQ(r[n], s[n]);

  std::filesystem::resize_file(dir / "s.kbc", std::filesystem::file_size(dir / "s.kbc") - 4);
  EXPECT_THROW(read_cache(dir / "s.kbc"), ParseError);
  write_file(dir / "bad.kbc", "NOPE0000000000000000");
  EXPECT_THROW(read_cache(dir / "bad.kbc"), ParseError);
}

TEST(Cache, HeaderIsLittleEndian) {
  auto dir = scratch_dir("cache_header");
  write_cache(TripleStore({{1, 0, 2}}, 3, 1), dir / "s.kbc");
  std::ifstream in(dir / "s.kbc", std::ios::binary);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), 32u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "KBC1");
  EXPECT_EQ(bytes[4], 3);
  EXPECT_EQ(bytes[8], 1);
  EXPECT_EQ(bytes[12], 1);
  EXPECT_EQ(bytes[20], 1);
  EXPECT_EQ(bytes[28], 2);
}
