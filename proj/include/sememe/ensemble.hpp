#ifndef SEMEME_ENSEMBLE_HPP
#define SEMEME_ENSEMBLE_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sememe/embeddings.hpp"
#include "sememe/external.hpp"
#include "sememe/internal.hpp"
#include "sememe/kb.hpp"
#include "sememe/score.hpp"

namespace sememe {

/// Min-max rescaling to [0, 1]; a constant vector maps to all zeros.
ScoreVector normalize_scores(const ScoreVector& v);

/// ratio/(1+ratio) * a + 1/(1+ratio) * b. Inputs are expected normalized.
ScoreVector ensemble(const ScoreVector& a, const ScoreVector& b, double ratio);

/// Sememe indices by descending score, ties by ascending index.
struct RankedPrediction {
  std::string word;
  std::vector<Index> order;
  Vector scores;

  friend bool operator==(const RankedPrediction&, const RankedPrediction&) = default;
};

RankedPrediction rank_scores(const ScoreVector& v);

/// Ratios are weight quotients between the first and second model of each pair.
struct EnsembleWeights {
  double spwe_spse = 2.1;          // standalone external ensemble
  double csp_spwe_spse = 0.3125;   // external half of CSP
  double spwcf_spcse = 4.0;        // internal ensemble
  double internal_external = 1.0;  // CSP
  double csp_lambda = 0.1;         // correlation weight of the SPSE model inside CSP

  void validate() const;
};

enum class Method { Spwe, Spse, SpweSpse, Spwcf, Spcse, SpwcfSpcse, Csp };

inline constexpr std::array<Method, 7> kAllMethods = {Method::Spwe,  Method::Spse,       Method::SpweSpse,
                                                      Method::Spwcf, Method::Spcse,      Method::SpwcfSpcse,
                                                      Method::Csp};

const char* method_name(Method m) noexcept;

enum class Sources { Internal, External, Both };

const char* sources_name(Sources s) noexcept;

struct CspPrediction {
  RankedPrediction ranking;
  ScoreVector scores;
  Sources sources = Sources::Both;
  bool fallback = false;  // one side had no evidence
};

/// All trained models plus the data they score against. Scoring is const
/// and safe to call from several threads.
class SememePredictor {
public:
  struct Models {
    AnnotationSet train;
    WordEmbeddings words;
    CharEmbeddings chars;
    SpweConfig spwe;
    SpseModel spse;      // standalone correlation weight
    SpseModel spse_csp;  // correlation weight used inside CSP
    PositionIndex position;
    SpcseModel spcse;
    EnsembleWeights weights;
  };

  explicit SememePredictor(Models models);

  Index sememe_count() const { return models_.train.sememe_count(); }
  const AnnotationSet& train() const { return models_.train; }
  const EnsembleWeights& weights() const { return models_.weights; }

  /// Raw model scores. Throw NoEmbedding / NoInternalEvidence when the
  /// model has nothing to go on for this word.
  ScoreVector spwe(std::string_view word) const;
  ScoreVector spse(std::string_view word, bool csp_variant = false) const;
  ScoreVector spwcf(std::string_view word) const;
  ScoreVector spcse(std::string_view word) const;

  /// Normalized two-model ensembles.
  ScoreVector external(std::string_view word, bool csp_variant = false) const;
  /// Uses whichever internal model has evidence when only one does.
  ScoreVector internal(std::string_view word) const;

  /// Internal and external combined; falls back to the available side.
  /// Throws Unpredictable when neither side has evidence.
  CspPrediction csp(std::string_view word) const;

  ScoreVector predict(Method method, std::string_view word) const;

private:
  Vector word_vector(std::string_view word) const;

  Models models_;
  SpweModel spwe_model_;
};

}  // namespace sememe

#endif  // SEMEME_ENSEMBLE_HPP
