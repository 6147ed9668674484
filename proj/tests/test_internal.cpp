#include <sstream>

#include <gtest/gtest.h>

#include "sememe/error.hpp"
#include "sememe/internal.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sememe;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// 铁匠 {human, occupation, metal, industrial}; 铁路 {metal, route}.
AnnotationSet smith_and_rail(bool with_rail) {
  std::vector<std::string> words = {"铁匠"};
  std::vector<std::vector<Index>> rows = {{0, 1, 2, 3}};
  if (with_rail) {
    words.push_back("铁路");
    rows.push_back({2, 4});
  }
  return {words, {"human", "occupation", "metal", "industrial", "route"}, rows};
}

CharEmbeddings chars_of(std::vector<CharEmbeddings::Entry> entries, Index dim, int n) {
  return {dim, n, std::move(entries)};
}

}  // namespace

TEST(Slots, Positions) {
  const auto slots = character_slots("火车站");
  ASSERT_EQ(slots.size(), 3u);
  EXPECT_EQ(slots[0], std::make_pair(std::string("火"), Position::Begin));
  EXPECT_EQ(slots[1], std::make_pair(std::string("车"), Position::Middle));
  EXPECT_EQ(slots[2], std::make_pair(std::string("站"), Position::End));

  for (const auto& [c, p] : character_slots("铁路")) EXPECT_NE(p, Position::Middle);
  const auto single = character_slots("铁");
  ASSERT_EQ(single.size(), 2u);
  EXPECT_EQ(single[0].second, Position::Begin);
  EXPECT_EQ(single[1].second, Position::End);
}

TEST(Spwcf, CharScoreHandValues) {
  const auto one = build_position_index(smith_and_rail(false));
  EXPECT_NEAR(spwcf_char_score(one, "铁", Position::Begin).scores(2), 1.0 / 4.0, 1e-15);
  EXPECT_TRUE(spwcf_char_score(one, "水", Position::Begin).scores.isZero(0.0));
  EXPECT_TRUE(spwcf_char_score(one, "铁", Position::End).scores.isZero(0.0));

  const auto two = build_position_index(smith_and_rail(true));
  EXPECT_NEAR(spwcf_char_score(two, "铁", Position::Begin).scores(2), 2.0 / 6.0, 1e-15);
  EXPECT_NEAR(spwcf_char_score(two, "铁", Position::Begin).scores(4), 1.0 / 6.0, 1e-15);
}

TEST(Spwcf, WordScoreIsSumOfSlots) {
  const auto index = build_position_index(smith_and_rail(true));
  const auto result = spwcf_score(index, "铁路");
  EXPECT_FALSE(result.all_unseen);
  const Vector want =
      spwcf_char_score(index, "铁", Position::Begin).scores + spwcf_char_score(index, "路", Position::End).scores;
  // metal: 2/6 from 铁 plus 1/2 from 路.
  EXPECT_NEAR(result.score.scores(2), 2.0 / 6.0 + 0.5, 1e-15);
  EXPECT_TRUE(result.score.scores.isApprox(want, 1e-15));
  EXPECT_NEAR(result.score.scores(0), 1.0 / 6.0, 1e-15);

  const auto unseen = spwcf_score(index, "水火");
  EXPECT_TRUE(unseen.all_unseen);
  EXPECT_TRUE(unseen.score.scores.isZero(0.0));
  EXPECT_THROW(spwcf_score(index, ""), Error);
}

TEST(Spwcf, MatchesNaiveDoubleLoopProperty) {
  Rng rng(100);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 1 + static_cast<Index>(rng.below(20));
    const auto words = gen::random_words(rng, n, 6, 4);
    const auto train = gen::random_annotations(rng, words, 7, 4);
    const auto index = build_position_index(train);
    for (int q = 0; q < 5; ++q) {
      const auto query = gen::random_words(rng, 1, 8, 5)[0];
      const auto got = spwcf_score(index, query).score.scores;
      const auto want = oracle::spwcf(train, query);
      for (Index j = 0; j < 7; ++j) {
        EXPECT_NEAR(got(j), want[static_cast<std::size_t>(j)], 1e-12);
        EXPECT_GE(got(j), 0.0);
      }
    }
  }
}

TEST(Spwcf, IndexRoundTrips) {
  Rng rng(101);
  const auto words = gen::random_words(rng, 20, 6, 4);
  const auto index = build_position_index(gen::random_annotations(rng, words, 7, 4));
  std::stringstream io;
  write_position_index(io, index);
  EXPECT_EQ(read_position_index(io, 7), index);

  std::istringstream bad("铁\tB\t5\t0:1\n");
  EXPECT_THROW(read_position_index(bad, 7), Error);
}

TEST(Prototype, SingleCandidate) {
  const auto chars = chars_of({{"铁", 1, vec({1, 0})}}, 2, 1);
  const auto c = select_prototype("铁", vec({0, 1}), chars);
  EXPECT_EQ(c.position, 0);
  EXPECT_EQ(c.label, 1);
}

TEST(Prototype, TwoCharsTwoPrototypes) {
  const auto chars = chars_of({{"铁", 1, vec({1, 0})},
                               {"铁", 2, vec({0.6, 0.8})},
                               {"匠", 1, vec({-1, 0})},
                               {"匠", 2, vec({0, -1})}},
                              2, 2);
  // metal points close to the second prototype of 铁.
  const auto metal = select_prototype("铁匠", vec({0.5, 0.9}), chars);
  EXPECT_EQ(metal.position, 0);
  EXPECT_EQ(metal.label, 2);
  const auto other = select_prototype("铁匠", vec({-0.2, -1}), chars);
  EXPECT_EQ(other.position, 1);
  EXPECT_EQ(other.label, 2);
  EXPECT_THROW(select_prototype("水", vec({1, 0}), chars), Error);
}

TEST(Prototype, MatchesExhaustiveProperty) {
  Rng rng(110);
  for (int trial = 0; trial < 100; ++trial) {
    const auto words = gen::random_words(rng, 4, 5, 4);
    const auto chars = gen::random_char_embeddings(rng, words, 3, 3);
    for (const auto& w : words) {
      const auto s = gen::random_vector(rng, 3);
      const auto got = select_prototype(w, s, chars);
      const auto want = oracle::exhaustive_prototype(w, oracle::to_std(s), chars);
      EXPECT_EQ(got.position, want.position);
      EXPECT_EQ(got.label, want.label);
    }
  }
}

TEST(SpcseScore, HandValues) {
  const auto chars = chars_of({{"铁", 1, vec({1, 2})}}, 2, 1);
  SpcseModel model;
  model.sememes = {"metal", "none"};
  model.characters = {"铁"};
  model.params.sememe_vectors = RowMatrix(2, 2);
  model.params.context_vectors = RowMatrix(2, 2);
  model.params.sememe_vectors << 0.25, 0.5, 1, -1;
  model.params.context_vectors << 0.25, 0, -1, 1;
  model.params.row_bias = Vector::Constant(1, 4.0);
  model.params.sememe_bias = Vector::Zero(2);
  const auto s = spcse_score(model, "铁", chars);
  EXPECT_NEAR(s.scores(0), 1 * 0.5 + 2 * 0.5, 1e-15);
  EXPECT_EQ(s.scores(1), 0.0);
  EXPECT_THROW(spcse_score(model, "水", chars), Error);
}

TEST(SpcseScore, MatchesExhaustiveProperty) {
  Rng rng(120);
  for (int trial = 0; trial < 50; ++trial) {
    const auto words = gen::random_words(rng, 5, 6, 3);
    const auto chars = gen::random_char_embeddings(rng, words, 4, 3);
    auto model = init_spcse(chars, gen::sememe_names(5), trial);
    model.params.sememe_vectors = RowMatrix::Random(5, 4);
    for (const auto& w : words) {
      const auto s = spcse_score(model, w, chars);
      for (Index j = 0; j < 5; ++j) {
        const auto sem = oracle::combined_row(model.params, j);
        const auto choice = oracle::exhaustive_prototype(w, sem, chars);
        EXPECT_NEAR(s.scores(j), oracle::dot(oracle::prototype_vector(w, choice, chars), sem), 1e-12);
      }
    }
  }
}

TEST(SpcseObjective, MatchesNaiveLoops) {
  Rng rng(130);
  for (int trial = 0; trial < 10; ++trial) {
    const auto words = gen::random_words(rng, 5, 6, 3);
    const auto train = gen::random_annotations(rng, words, 4, 2);
    const auto chars = gen::random_char_embeddings(rng, words, 3, 2);
    const auto corr = compute_pmi(train);
    const auto data = make_spcse_data(train, corr, chars);
    auto model = init_spcse(chars, train.sememes(), trial);
    model.params.row_bias = gen::random_vector(rng, model.params.row_bias.size());
    const auto selections = spcse_selections(model, data, chars);
    const auto choose = [&](Index i, Index j) {
      return oracle::exhaustive_prototype(data.rows.word(i), oracle::combined_row(model.params, j), chars);
    };
    EXPECT_NEAR(spcse_objective(model, data, chars, selections, 0.1),
                oracle::spcse_loss(model.params, data.rows, chars, corr, 0.1, choose), 1e-10);
  }
}

TEST(SpcseGradient, MatchesFiniteDifferences) {
  Rng rng(140);
  for (int trial = 0; trial < 5; ++trial) {
    const auto words = gen::random_words(rng, 4, 5, 3);
    const auto train = gen::random_annotations(rng, words, 3, 2);
    const auto chars = gen::random_char_embeddings(rng, words, 3, 3);
    const auto corr = compute_pmi(train);
    const auto data = make_spcse_data(train, corr, chars);
    auto model = init_spcse(chars, train.sememes(), trial);
    model.params.sememe_vectors = RowMatrix::Random(3, 3);
    const auto selections = spcse_selections(model, data, chars);
    const auto analytic = spcse_gradient(model, data, chars, selections, 0.1);
    const auto numeric = oracle::numeric_gradient(model.params, [&](const FactorParams& p) {
      SpcseModel probe = model;
      probe.params = p;
      return spcse_objective(probe, data, chars, selections, 0.1);
    });
    EXPECT_LE(oracle::relative_error(analytic, numeric), 1e-6);
  }
}

TEST(SpcseTraining, OneCellConverges) {
  const AnnotationSet train({"铁"}, {"metal"}, {{0}});
  const auto chars = chars_of({{"铁", 1, vec({0.6, 0.8})}}, 2, 1);
  SpcseHyper hyper;
  hyper.lambda = 0.0;
  hyper.epochs = 200;
  std::vector<double> losses;
  const auto model =
      train_spcse(train, compute_pmi(train), chars, hyper, [&](int, double l) { losses.push_back(l); });
  const auto& p = model.params;
  EXPECT_NEAR(chars.vector(0).dot(p.combined().row(0)) + p.row_bias(0) + p.sememe_bias(0), 1.0, 0.05);
  for (std::size_t e = 1; e < losses.size(); ++e) EXPECT_LE(losses[e], losses[e - 1]);
}

TEST(SpcseTraining, ZeroEpochsAndDeterminism) {
  Rng rng(150);
  const auto words = gen::random_words(rng, 20, 8, 3);
  const auto train = gen::random_annotations(rng, words, 6, 3);
  const auto chars = gen::random_char_embeddings(rng, words, 4, 3, 0.5);
  const auto corr = compute_pmi(train);
  SpcseHyper hyper;
  hyper.epochs = 0;
  hyper.seed = 3;
  EXPECT_EQ(train_spcse(train, corr, chars, hyper), init_spcse(chars, train.sememes(), 3));
  hyper.epochs = 4;
  const auto a = train_spcse(train, corr, chars, hyper);
  EXPECT_EQ(a, train_spcse(train, corr, chars, hyper));
  std::stringstream io;
  write_spcse(io, a);
  EXPECT_EQ(read_spcse(io), a);
}

TEST(SpcseHyperDefaults, PaperValues) {
  const SpcseHyper h;
  EXPECT_EQ(h.lambda, 0.1);
  EXPECT_EQ(h.zero_sample_prob, 0.025);
  EXPECT_EQ(h.epochs, 20);
  EXPECT_EQ(h.lr0, 0.01);
}
