#ifndef SEMEME_KB_HPP
#define SEMEME_KB_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "sememe/types.hpp"

namespace sememe {

/// Word-sememe knowledge base: a word list, a sememe inventory, and the
/// binary annotation matrix between them. Every word carries at least one
/// sememe; per-word sememe sets are kept as ascending inventory indices.
class AnnotationSet {
public:
  AnnotationSet() = default;

  /// Validates and takes ownership. `word_sememes[i]` lists the inventory
  /// indices annotated on `words[i]`; duplicates within a row are merged.
  AnnotationSet(std::vector<std::string> words, std::vector<std::string> sememes,
                std::vector<std::vector<Index>> word_sememes);

  Index word_count() const { return static_cast<Index>(words_.size()); }
  Index sememe_count() const { return static_cast<Index>(sememes_.size()); }
  bool empty() const { return words_.empty(); }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::string>& sememes() const { return sememes_; }
  const std::string& word(Index i) const { return words_[static_cast<std::size_t>(i)]; }
  const std::string& sememe(Index j) const { return sememes_[static_cast<std::size_t>(j)]; }

  /// S_w for word i, ascending.
  std::span<const Index> sememes_of(Index i) const { return rows_[static_cast<std::size_t>(i)]; }
  bool annotated(Index i, Index j) const;
  Index pair_count() const;

  std::optional<Index> find_word(std::string_view word) const;
  std::optional<Index> find_sememe(std::string_view sememe) const;

  /// M as a sparse word x sememe matrix with unit entries.
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix() const;

  /// View on a subset of words, in the order given, sharing this inventory.
  AnnotationSet subset(std::span<const Index> word_indices) const;

  friend bool operator==(const AnnotationSet&, const AnnotationSet&) = default;

private:
  std::vector<std::string> words_;
  std::vector<std::string> sememes_;
  std::vector<std::vector<Index>> rows_;
  std::unordered_map<std::string, Index> word_index_;
  std::unordered_map<std::string, Index> sememe_index_;
};

/// Reads `word<TAB>sememe1,sememe2,...` records. Blank lines are ignored;
/// repeated words union their sets. Sememe inventory order is first use.
AnnotationSet read_annotations(std::istream& in, const std::string& source = "<stream>");
AnnotationSet load_annotations(const std::filesystem::path& path);

/// Re-expresses `set` against a larger inventory containing all of its sememes.
AnnotationSet align_to_inventory(const AnnotationSet& set, const std::vector<std::string>& inventory);

/// Writes one record per word, sememes in inventory order.
void write_annotations(std::ostream& out, const AnnotationSet& set);
void save_annotations(const std::filesystem::path& path, const AnnotationSet& set);

/// Drops sememes annotated on fewer than `min_count` words, then words left
/// without sememes. Surviving sememes keep their relative order.
AnnotationSet filter_sememes(const AnnotationSet& set, Index min_count);

struct SplitSizes {
  Index train = 0;
  Index dev = 0;
  Index test = 0;
};

struct DatasetSplit {
  AnnotationSet train;
  AnnotationSet dev;
  AnnotationSet test;
  std::uint64_t seed = 0;
};

/// Uniform random partition of the words, a pure function of (word order,
/// sizes, seed). Words beyond sizes.train+dev+test are left out. Inside
/// each part, words keep their original relative order.
DatasetSplit split_dataset(const AnnotationSet& set, SplitSizes sizes, std::uint64_t seed);

/// Sparse symmetric PMI between sememes, estimated from co-annotation on a
/// word set. Only co-occurring pairs are stored; entries are kept with j <= k.
class SememeCorrelation {
public:
  struct Entry {
    Index first;
    Index second;
    double value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  SememeCorrelation() = default;
  SememeCorrelation(Index sememe_count, Index word_count, std::vector<Entry> entries);

  Index sememe_count() const { return sememe_count_; }
  Index word_count() const { return word_count_; }
  /// Sorted by (first, second), first <= second.
  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<double> value(Index j, Index k) const;

  /// Dense m x m matrix with zeros for unobserved pairs.
  Matrix dense() const;

  friend bool operator==(const SememeCorrelation&, const SememeCorrelation&) = default;

private:
  Index sememe_count_ = 0;
  Index word_count_ = 0;
  std::vector<Entry> entries_;
};

/// C_jk = ln(n_jk * N / (n_j * n_k)) over the words of `train`.
SememeCorrelation compute_pmi(const AnnotationSet& train);

/// Cached form: a `words<TAB>N` header then sorted `j<TAB>k<TAB>value` rows.
void write_correlation(std::ostream& out, const SememeCorrelation& corr);
SememeCorrelation read_correlation(std::istream& in, Index sememe_count,
                                   const std::string& source = "<stream>");

/// Token counts from a whitespace-tokenized corpus.
class CorpusFrequencies {
public:
  CorpusFrequencies() = default;
  explicit CorpusFrequencies(std::unordered_map<std::string, std::uint64_t> counts)
      : counts_(std::move(counts)) {}

  std::uint64_t count(std::string_view word) const;
  std::size_t distinct() const { return counts_.size(); }

private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

CorpusFrequencies read_corpus_frequencies(std::istream& in);
CorpusFrequencies load_corpus_frequencies(const std::filesystem::path& path);

}  // namespace sememe

#endif  // SEMEME_KB_HPP
