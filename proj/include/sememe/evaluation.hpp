#ifndef SEMEME_EVALUATION_HPP
#define SEMEME_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sememe/ensemble.hpp"
#include "sememe/kb.hpp"

namespace sememe {

/// Mean over gold sememes of precision at the rank where each is found.
/// Throws EvaluationSkip for an empty gold set.
double average_precision(const RankedPrediction& ranked, std::span<const Index> gold);

/// Scores one word; throws sememe::Error when the word cannot be predicted.
using Predictor = std::function<ScoreVector(std::string_view word)>;

/// AP for one test word, or the reason it was skipped.
struct WordOutcome {
  std::optional<double> ap;
  std::string skip_reason;
};

/// Outcome per test word, in test order. With threads > 1 words are scored
/// concurrently; results do not depend on the thread count.
std::vector<WordOutcome> score_words(const Predictor& predictor, const AnnotationSet& test, int threads = 1);

struct MapResult {
  double map = 0.0;
  Index evaluated = 0;
  std::map<std::string, Index> skipped;  // reason -> count

  Index skipped_total() const;
};

/// Unweighted mean AP over predictable test words. Throws EvaluationEmpty
/// when every word was skipped.
MapResult evaluate_map(const Predictor& predictor, const AnnotationSet& test, int threads = 1);
MapResult summarize(const std::vector<WordOutcome>& outcomes);

struct ExclusionRules {
  bool numerals = true;
  bool punctuation = true;
  bool single_character = true;
  bool zero_frequency = true;
  bool foreign_abbreviations = true;
};

/// First rule that excludes `word`, or nullopt.
std::optional<std::string> exclusion_reason(std::string_view word, std::uint64_t frequency,
                                            const ExclusionRules& rules);

/// Inclusive upper bounds of every bucket but the last, which is open.
std::vector<std::uint64_t> default_bucket_bounds();
std::size_t bucket_of(std::uint64_t frequency, const std::vector<std::uint64_t>& bounds);
std::string bucket_label(std::size_t bucket, const std::vector<std::uint64_t>& bounds);

struct FrequencyBuckets {
  struct Bucket {
    std::string label;
    Index words = 0;          // test words assigned, before prediction skips
    Index evaluated = 0;
    std::optional<double> map;  // absent when nothing was evaluated
  };

  std::vector<std::uint64_t> bounds;
  std::vector<Bucket> buckets;
  std::map<std::string, Index> excluded;  // by rule
  std::map<std::string, Index> skipped;   // by prediction failure
};

FrequencyBuckets evaluate_buckets(const Predictor& predictor, const AnnotationSet& test,
                                  const CorpusFrequencies& freqs, const std::vector<std::uint64_t>& bounds,
                                  const ExclusionRules& rules, int threads = 1);

struct MethodReport {
  std::string method;
  MapResult overall;
  std::optional<FrequencyBuckets> buckets;
};

/// Method table, skip counts, and (when present) the frequency table.
void write_report(std::ostream& out, const std::vector<MethodReport>& reports);

}  // namespace sememe

#endif  // SEMEME_EVALUATION_HPP
