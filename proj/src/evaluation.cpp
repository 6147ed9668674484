#include "sememe/evaluation.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

#include "sememe/error.hpp"
#include "sememe/io.hpp"
#include "sememe/utf8.hpp"

namespace sememe {

double average_precision(const RankedPrediction& ranked, std::span<const Index> gold) {
  if (gold.empty()) throw Error(Errc::EvaluationSkip, "empty gold set for '" + ranked.word + "'");
  std::vector<Index> sorted(gold.begin(), gold.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  double sum = 0.0;
  Index hits = 0;
  for (std::size_t r = 0; r < ranked.order.size() && hits < static_cast<Index>(sorted.size()); ++r) {
    if (std::binary_search(sorted.begin(), sorted.end(), ranked.order[r])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  if (hits != static_cast<Index>(sorted.size())) {
    throw Error(Errc::IndexMismatch, "gold sememe missing from the candidate ranking of '" + ranked.word + "'");
  }
  return sum / static_cast<double>(sorted.size());
}

std::vector<WordOutcome> score_words(const Predictor& predictor, const AnnotationSet& test, int threads) {
  std::vector<WordOutcome> outcomes(static_cast<std::size_t>(test.word_count()));
  const auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < outcomes.size(); i += stride) {
      const auto idx = static_cast<Index>(i);
      try {
        const auto ranked = rank_scores(predictor(test.word(idx)));
        outcomes[i].ap = average_precision(ranked, test.sememes_of(idx));
      } catch (const Error& e) {
        switch (e.code()) {
          case Errc::NoEmbedding:
          case Errc::NoNeighbors:
          case Errc::NoInternalEvidence:
          case Errc::Unpredictable:
          case Errc::EvaluationSkip:
            outcomes[i].skip_reason = errc_name(e.code());
            break;
          default:
            throw;
        }
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, threads));
  if (n == 1 || outcomes.size() < 2) {
    work(0, 1);
    return outcomes;
  }
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) {
      pool.emplace_back([&, t] {
        try {
          work(t, n);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outcomes;
}

Index MapResult::skipped_total() const {
  Index total = 0;
  for (const auto& [reason, count] : skipped) total += count;
  return total;
}

MapResult summarize(const std::vector<WordOutcome>& outcomes) {
  MapResult result;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.ap) {
      sum += *o.ap;
      ++result.evaluated;
    } else {
      ++result.skipped[o.skip_reason];
    }
  }
  if (result.evaluated > 0) result.map = sum / static_cast<double>(result.evaluated);
  return result;
}

MapResult evaluate_map(const Predictor& predictor, const AnnotationSet& test, int threads) {
  auto result = summarize(score_words(predictor, test, threads));
  if (result.evaluated == 0) {
    throw Error(Errc::EvaluationEmpty, "no test word could be evaluated (" +
                                           std::to_string(result.skipped_total()) + " skipped)");
  }
  return result;
}

namespace {

bool is_numeral(char32_t c) {
  if ((c >= U'0' && c <= U'9') || (c >= 0xFF10 && c <= 0xFF19)) return true;
  static constexpr std::u32string_view kChinese = U"〇零一二三四五六七八九十百千万亿两壹贰叁肆伍陆柒捌玖拾佰仟";
  return kChinese.find(c) != std::u32string_view::npos;
}

bool is_punctuation(char32_t c) {
  if (c < 0x80) return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
                       (c >= 0x7B && c <= 0x7E);
  return (c >= 0x2000 && c <= 0x206F) || (c >= 0x3000 && c <= 0x303F) || (c >= 0xFF01 && c <= 0xFF0F) ||
         (c >= 0xFF1A && c <= 0xFF20) || (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65);
}

bool is_latin_letter(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z') || (c >= 0xFF21 && c <= 0xFF3A) ||
         (c >= 0xFF41 && c <= 0xFF5A);
}

}  // namespace

std::optional<std::string> exclusion_reason(std::string_view word, std::uint64_t frequency,
                                            const ExclusionRules& rules) {
  std::vector<char32_t> cps;
  for (const auto& c : split_characters(word)) cps.push_back(decode_scalar(c));
  if (rules.numerals && !cps.empty() && std::all_of(cps.begin(), cps.end(), is_numeral)) return "numeral";
  if (rules.punctuation && std::any_of(cps.begin(), cps.end(), is_punctuation)) return "punctuation";
  if (rules.single_character && cps.size() == 1) return "single_character";
  if (rules.zero_frequency && frequency == 0) return "zero_frequency";
  if (rules.foreign_abbreviations && std::any_of(cps.begin(), cps.end(), is_latin_letter) &&
      std::all_of(cps.begin(), cps.end(), [](char32_t c) { return is_latin_letter(c) || is_numeral(c); })) {
    return "foreign_abbreviation";
  }
  return std::nullopt;
}

std::vector<std::uint64_t> default_bucket_bounds() { return {50, 100, 1000, 5000, 10000, 30000}; }

std::size_t bucket_of(std::uint64_t frequency, const std::vector<std::uint64_t>& bounds) {
  return static_cast<std::size_t>(std::lower_bound(bounds.begin(), bounds.end(), frequency) - bounds.begin());
}

std::string bucket_label(std::size_t bucket, const std::vector<std::uint64_t>& bounds) {
  if (bounds.empty()) return "all";
  if (bucket == 0) return "<=" + std::to_string(bounds[0]);
  if (bucket >= bounds.size()) return ">" + std::to_string(bounds.back());
  return std::to_string(bounds[bucket - 1] + 1) + "-" + std::to_string(bounds[bucket]);
}

FrequencyBuckets evaluate_buckets(const Predictor& predictor, const AnnotationSet& test,
                                  const CorpusFrequencies& freqs, const std::vector<std::uint64_t>& bounds,
                                  const ExclusionRules& rules, int threads) {
  if (!std::is_sorted(bounds.begin(), bounds.end()) ||
      std::adjacent_find(bounds.begin(), bounds.end()) != bounds.end()) {
    throw Error(Errc::Config, "bucket bounds must be strictly increasing");
  }
  FrequencyBuckets result;
  result.bounds = bounds;
  for (std::size_t b = 0; b <= bounds.size(); ++b) result.buckets.push_back({bucket_label(b, bounds), 0, 0, {}});

  std::vector<Index> kept;
  std::vector<std::size_t> bucket_ids;
  for (Index i = 0; i < test.word_count(); ++i) {
    const auto freq = freqs.count(test.word(i));
    if (const auto reason = exclusion_reason(test.word(i), freq, rules)) {
      ++result.excluded[*reason];
      continue;
    }
    kept.push_back(i);
    bucket_ids.push_back(bucket_of(freq, bounds));
  }
  const auto outcomes = score_words(predictor, test.subset(kept), threads);

  std::vector<double> sums(result.buckets.size(), 0.0);
  for (std::size_t n = 0; n < outcomes.size(); ++n) {
    auto& bucket = result.buckets[bucket_ids[n]];
    ++bucket.words;
    if (outcomes[n].ap) {
      sums[bucket_ids[n]] += *outcomes[n].ap;
      ++bucket.evaluated;
    } else {
      ++result.skipped[outcomes[n].skip_reason];
    }
  }
  for (std::size_t b = 0; b < result.buckets.size(); ++b) {
    auto& bucket = result.buckets[b];
    if (bucket.evaluated > 0) bucket.map = sums[b] / static_cast<double>(bucket.evaluated);
  }
  return result;
}

void write_report(std::ostream& out, const std::vector<MethodReport>& reports) {
  out << "# MAP on sememe prediction\n";
  out << "method\tMAP\tevaluated\tskipped\n";
  for (const auto& r : reports) {
    out << r.method << '\t' << (r.overall.evaluated > 0 ? format_fixed(r.overall.map, 4) : std::string("-")) << '\t' << r.overall.evaluated << '\t'
        << r.overall.skipped_total() << '\n';
  }
  out << "\n# skipped words by reason\n";
  out << "method\treason\tcount\n";
  for (const auto& r : reports) {
    for (const auto& [reason, count] : r.overall.skipped) out << r.method << '\t' << reason << '\t' << count << '\n';
  }

  const auto with_buckets = std::find_if(reports.begin(), reports.end(), [](const MethodReport& r) {
    return r.buckets.has_value();
  });
  if (with_buckets == reports.end()) return;

  const auto& layout = *with_buckets->buckets;
  out << "\n# MAP by word frequency\n";
  out << "word frequency";
  for (const auto& b : layout.buckets) out << '\t' << b.label;
  out << "\nwords";
  for (const auto& b : layout.buckets) out << '\t' << b.words;
  out << '\n';
  for (const auto& r : reports) {
    if (!r.buckets) continue;
    out << r.method;
    for (const auto& b : r.buckets->buckets) out << '\t' << (b.map ? format_fixed(*b.map, 4) : std::string("-"));
    out << '\n';
  }
  out << "\n# excluded words by reason\n";
  out << "reason\tcount\n";
  for (const auto& [reason, count] : layout.excluded) out << reason << '\t' << count << '\n';
}

}  // namespace sememe
