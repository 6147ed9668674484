#ifndef SEMEME_EXTERNAL_HPP
#define SEMEME_EXTERNAL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sememe/embeddings.hpp"
#include "sememe/factorization.hpp"
#include "sememe/kb.hpp"
#include "sememe/score.hpp"

namespace sememe {

// ---------------------------------------------------------------------------
// Embedding-neighbor filtering

struct SpweConfig {
  double c = 0.8;  // rank discount, 0 < c < 1
  Index k = 100;   // neighbors considered

  void validate() const;
};

/// Collaborative filtering over the nearest annotated words in embedding
/// space: score(s_j) = sum over the top-k train neighbors of
/// cos(w, w_i) * M_ij * c^rank, ranks starting at 1.
class SpweModel {
public:
  /// Train words lacking a vector are skipped and counted.
  SpweModel(const AnnotationSet& train, const WordEmbeddings& emb, SpweConfig cfg);

  /// Throws NoNeighbors if no train word had a vector. `exclude_word`, when
  /// non-empty, is kept out of the neighbor list.
  ScoreVector score(const Eigen::Ref<const Vector>& word_vec, std::string_view exclude_word = {}) const;

  Index skipped_train_words() const { return skipped_; }
  Index sememe_count() const { return train_.sememe_count(); }
  const SpweConfig& config() const { return cfg_; }

private:
  AnnotationSet train_;       // train words that have vectors
  WordEmbeddings neighbors_;  // same order as train_
  SpweConfig cfg_;
  Index skipped_ = 0;
};

ScoreVector spwe_score(const Eigen::Ref<const Vector>& word_vec, const AnnotationSet& train,
                       const WordEmbeddings& emb, const SpweConfig& cfg);

// ---------------------------------------------------------------------------
// Sememe embeddings by joint factorization of word-sememe and sememe-sememe
// matrices, with word vectors frozen.

struct SpseHyper {
  double lambda = 0.5;
  double zero_sample_prob = 0.005;
  int epochs = 20;
  double lr0 = 0.01;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SpseModel {
  std::vector<std::string> sememes;
  std::vector<std::string> words;  // one bias per train word, in this order
  FactorParams params;

  Index dim() const { return params.dim(); }
  friend bool operator==(const SpseModel&, const SpseModel&) = default;
};

/// Train words with vectors and their frozen features.
struct SpseData {
  AnnotationSet rows;
  RowMatrix features;  // one word vector per row of `rows`
  Matrix correlation;  // dense C, zeros where unobserved
  Index dropped = 0;   // train words without a vector
};

SpseData make_spse_data(const AnnotationSet& train, const SememeCorrelation& corr, const WordEmbeddings& emb);

/// Full objective: squared error over every word-sememe cell plus lambda
/// times squared error over every ordered sememe pair.
double spse_objective(const SpseModel& model, const SpseData& data, double lambda);
/// Gradient of spse_objective with respect to all model parameters.
FactorParams spse_gradient(const SpseModel& model, const SpseData& data, double lambda);

/// Seeded initialization, identical to a zero-epoch training run.
SpseModel init_spse(const SpseData& data, std::vector<std::string> sememes, Index dim, std::uint64_t seed);

SpseModel train_spse(const AnnotationSet& train, const SememeCorrelation& corr, const WordEmbeddings& emb,
                     const SpseHyper& hyper, const EpochObserver& observer = {});

/// score(s_j) = w . (s_j + sbar_j); biases are not used.
ScoreVector spse_score(const SpseModel& model, const Eigen::Ref<const Vector>& word_vec);

void write_spse(std::ostream& out, const SpseModel& model);
SpseModel read_spse(std::istream& in, const std::string& source = "<stream>");
void save_spse(const std::filesystem::path& path, const SpseModel& model);
SpseModel load_spse(const std::filesystem::path& path);

}  // namespace sememe

#endif  // SEMEME_EXTERNAL_HPP
