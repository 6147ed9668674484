#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "sememe/embeddings.hpp"
#include "sememe/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sememe;

namespace {

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected sememe::Error";
  return Errc::Config;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST(Cosine, HandValues) {
  EXPECT_DOUBLE_EQ(cosine(vec({3, 4}), vec({3, 4})), 1.0);
  EXPECT_EQ(cosine(vec({1, 0}), vec({0, 1})), 0.0);
  EXPECT_NEAR(cosine(vec({1, 0}), vec({1, 1})), 0.70710678118654752, 1e-12);
  EXPECT_EQ(code_of([] { cosine(vec({0, 0}), vec({1, 1})); }), Errc::ZeroVector);
  EXPECT_EQ(code_of([] { cosine(vec({1, 0}), vec({1, 1, 1})); }), Errc::DimensionMismatch);
}

TEST(Cosine, SymmetricAndBoundedProperty) {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const auto dim = 1 + static_cast<Index>(rng.below(8));
    const auto u = gen::random_vector(rng, dim, 10.0);
    const auto v = gen::random_vector(rng, dim, 0.01);
    EXPECT_EQ(cosine(u, v), cosine(v, u));
    EXPECT_LE(std::abs(cosine(u, v)), 1.0 + 1e-12);
  }
}

TEST(WordEmbeddingsIo, LoadAndErrors) {
  std::istringstream good("a 1 0\nb 0.5 0.25\n");
  const auto emb = read_word_embeddings(good, 2);
  EXPECT_EQ(emb.size(), 2);
  EXPECT_EQ(emb.vector(*emb.find("b"))(1), 0.25);

  std::istringstream short_row("a 1 0\nb 1\n");
  EXPECT_EQ(code_of([&] { read_word_embeddings(short_row, 2); }), Errc::DimensionMismatch);
  std::istringstream dup("a 1 0\na 0 1\n");
  EXPECT_EQ(code_of([&] { read_word_embeddings(dup, 2); }), Errc::DuplicateWord);
  std::istringstream zero("a 0 0\n");
  EXPECT_EQ(code_of([&] { read_word_embeddings(zero, 2); }), Errc::ZeroVector);
}

TEST(WordEmbeddingsIo, RoundTripProperty) {
  Rng rng(4);
  const auto words = gen::random_words(rng, 20, 30, 3);
  const auto emb = gen::random_word_embeddings(rng, words, 7);
  std::ostringstream out;
  write_word_embeddings(out, emb);
  std::istringstream in(out.str());
  const auto back = read_word_embeddings(in, 7);
  EXPECT_EQ(back.words(), emb.words());
  EXPECT_EQ(back.matrix(), emb.matrix());
}

TEST(CharEmbeddingsIo, Prototypes) {
  std::istringstream in("铁 1 1 0\n铁 2 0 1\n匠 1 1 1\n");
  const auto chars = read_char_embeddings(in, 2, 3);
  EXPECT_EQ(chars.prototypes(*chars.find("铁")).size(), 2u);
  EXPECT_EQ(chars.prototype_count(), 3);

  std::istringstream too_many("铁 4 1 0\n");
  EXPECT_EQ(code_of([&] { read_char_embeddings(too_many, 2, 3); }), Errc::PrototypeOutOfRange);
  std::istringstream dup("铁 1 1 0\n铁 1 0 1\n");
  EXPECT_EQ(code_of([&] { read_char_embeddings(dup, 2, 3); }), Errc::DuplicateWord);
  std::istringstream two_chars("铁匠 1 1 0\n");
  EXPECT_EQ(code_of([&] { read_char_embeddings(two_chars, 2, 3); }), Errc::MalformedLine);
}

TEST(Neighbors, ExcludesAndRanks) {
  RowMatrix m(3, 2);
  m << 1, 0, 1, 1, 0, 1;
  const WordEmbeddings table({"self", "near", "far"}, m);
  const auto list = nearest_words(vec({1, 0}), table, 10, {"self"});
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].word, "near");
  EXPECT_EQ(list[0].rank, 1);
  EXPECT_EQ(list[1].word, "far");
  EXPECT_EQ(list[1].rank, 2);
}

TEST(Neighbors, TiesBreakLexicographically) {
  RowMatrix m(3, 2);
  m << 1, 1, 2, 2, 0, 1;
  const WordEmbeddings table({"zeta", "alpha", "mid"}, m);
  const auto list = nearest_words(vec({1, 1}), table, 2);
  EXPECT_EQ(list[0].word, "alpha");
  EXPECT_EQ(list[1].word, "zeta");
}

TEST(Neighbors, MatchesBruteForceProperty) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto words = gen::random_words(rng, 5 + static_cast<Index>(rng.below(20)), 40, 3);
    const auto emb = gen::random_word_embeddings(rng, words, 4);
    const auto query = gen::random_vector(rng, 4);
    const auto k = 1 + static_cast<Index>(rng.below(30));
    const auto& excluded = words[rng.below(words.size())];
    const auto got = nearest_words(query, emb, k, {excluded});
    const auto want = oracle::nearest(oracle::to_std(query), emb, static_cast<std::size_t>(k), excluded);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t r = 0; r < got.size(); ++r) {
      EXPECT_EQ(got[r].word, want[r].word);
      EXPECT_NEAR(got[r].similarity, want[r].similarity, 1e-12);
      EXPECT_EQ(got[r].rank, static_cast<Index>(r + 1));
    }
  }
}
