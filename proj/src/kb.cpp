#include "sememe/kb.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <tuple>
#include <ostream>

#include "sememe/error.hpp"
#include "sememe/io.hpp"
#include "sememe/random.hpp"

namespace sememe {

AnnotationSet::AnnotationSet(std::vector<std::string> words, std::vector<std::string> sememes,
                             std::vector<std::vector<Index>> word_sememes)
    : words_(std::move(words)), sememes_(std::move(sememes)), rows_(std::move(word_sememes)) {
  if (rows_.size() != words_.size()) {
    throw Error(Errc::IndexMismatch, "annotation rows do not match word count");
  }
  for (std::size_t j = 0; j < sememes_.size(); ++j) {
    if (sememes_[j].empty()) throw Error(Errc::MalformedLine, "empty sememe identifier");
    if (!sememe_index_.emplace(sememes_[j], static_cast<Index>(j)).second) {
      throw Error(Errc::DuplicateWord, "duplicate sememe '" + sememes_[j] + "'");
    }
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw Error(Errc::MalformedLine, "empty word");
    if (!word_index_.emplace(words_[i], static_cast<Index>(i)).second) {
      throw Error(Errc::DuplicateWord, "duplicate word '" + words_[i] + "'");
    }
    auto& row = rows_[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (row.empty()) throw Error(Errc::MalformedLine, "word '" + words_[i] + "' has no sememes");
    if (row.front() < 0 || row.back() >= sememe_count()) {
      throw Error(Errc::IndexMismatch, "sememe index out of range for word '" + words_[i] + "'");
    }
  }
}

bool AnnotationSet::annotated(Index i, Index j) const {
  const auto row = sememes_of(i);
  return std::binary_search(row.begin(), row.end(), j);
}

Index AnnotationSet::pair_count() const {
  Index total = 0;
  for (const auto& row : rows_) total += static_cast<Index>(row.size());
  return total;
}

std::optional<Index> AnnotationSet::find_word(std::string_view word) const {
  const auto it = word_index_.find(std::string(word));
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> AnnotationSet::find_sememe(std::string_view sememe) const {
  const auto it = sememe_index_.find(std::string(sememe));
  if (it == sememe_index_.end()) return std::nullopt;
  return it->second;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> AnnotationSet::matrix() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(pair_count()));
  for (Index i = 0; i < word_count(); ++i) {
    for (Index j : sememes_of(i)) triplets.emplace_back(i, j, 1.0);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(word_count(), sememe_count());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

AnnotationSet AnnotationSet::subset(std::span<const Index> word_indices) const {
  std::vector<std::string> words;
  std::vector<std::vector<Index>> rows;
  words.reserve(word_indices.size());
  rows.reserve(word_indices.size());
  for (Index i : word_indices) {
    words.push_back(word(i));
    rows.push_back(rows_[static_cast<std::size_t>(i)]);
  }
  return AnnotationSet(std::move(words), sememes_, std::move(rows));
}

AnnotationSet read_annotations(std::istream& in, const std::string& source) {
  std::vector<std::string> words;
  std::vector<std::string> sememes;
  std::vector<std::vector<Index>> rows;
  std::unordered_map<std::string, Index> word_index;
  std::unordered_map<std::string, Index> sememe_index;

  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto where = [&] { return source + ":" + std::to_string(line_no); };
    const auto tab = text.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(Errc::MalformedLine, where() + ": expected word<TAB>sememes");
    }
    const std::string word(trim(text.substr(0, tab)));
    if (word.empty()) throw Error(Errc::MalformedLine, where() + ": empty word");

    std::vector<Index> ids;
    for (std::string_view token : split_on(text.substr(tab + 1), ',')) {
      token = trim(token);
      if (token.empty()) continue;
      auto [it, inserted] = sememe_index.emplace(std::string(token), static_cast<Index>(sememes.size()));
      if (inserted) sememes.emplace_back(token);
      ids.push_back(it->second);
    }
    if (ids.empty()) {
      throw Error(Errc::MalformedLine, where() + ": word '" + word + "' has an empty sememe list");
    }

    auto [it, inserted] = word_index.emplace(word, static_cast<Index>(words.size()));
    if (inserted) {
      words.push_back(word);
      rows.emplace_back();
    }
    auto& row = rows[static_cast<std::size_t>(it->second)];
    row.insert(row.end(), ids.begin(), ids.end());
  }
  if (words.empty()) throw Error(Errc::EmptyDataset, source + ": no annotation records");
  return AnnotationSet(std::move(words), std::move(sememes), std::move(rows));
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_annotations(in, path.string());
}

AnnotationSet align_to_inventory(const AnnotationSet& set, const std::vector<std::string>& inventory) {
  std::unordered_map<std::string, Index> index;
  for (std::size_t j = 0; j < inventory.size(); ++j) index.emplace(inventory[j], static_cast<Index>(j));
  std::vector<Index> remap;
  for (const auto& s : set.sememes()) {
    const auto it = index.find(s);
    if (it == index.end()) throw Error(Errc::IndexMismatch, "sememe '" + s + "' is not in the inventory");
    remap.push_back(it->second);
  }
  std::vector<std::vector<Index>> rows;
  for (Index i = 0; i < set.word_count(); ++i) {
    auto& row = rows.emplace_back();
    for (Index j : set.sememes_of(i)) row.push_back(remap[static_cast<std::size_t>(j)]);
  }
  return AnnotationSet(set.words(), inventory, std::move(rows));
}

void write_annotations(std::ostream& out, const AnnotationSet& set) {
  for (Index i = 0; i < set.word_count(); ++i) {
    out << set.word(i) << '\t';
    bool first = true;
    for (Index j : set.sememes_of(i)) {
      if (!first) out << ',';
      out << set.sememe(j);
      first = false;
    }
    out << '\n';
  }
}

void save_annotations(const std::filesystem::path& path, const AnnotationSet& set) {
  auto out = open_output(path);
  write_annotations(out, set);
}

AnnotationSet filter_sememes(const AnnotationSet& set, Index min_count) {
  if (min_count < 1) throw Error(Errc::Config, "min_count must be >= 1");
  std::vector<Index> usage(static_cast<std::size_t>(set.sememe_count()), 0);
  for (Index i = 0; i < set.word_count(); ++i) {
    for (Index j : set.sememes_of(i)) ++usage[static_cast<std::size_t>(j)];
  }

  std::vector<Index> remap(usage.size(), -1);
  std::vector<std::string> sememes;
  for (std::size_t j = 0; j < usage.size(); ++j) {
    if (usage[j] >= min_count) {
      remap[j] = static_cast<Index>(sememes.size());
      sememes.push_back(set.sememe(static_cast<Index>(j)));
    }
  }

  std::vector<std::string> words;
  std::vector<std::vector<Index>> rows;
  for (Index i = 0; i < set.word_count(); ++i) {
    std::vector<Index> row;
    for (Index j : set.sememes_of(i)) {
      if (remap[static_cast<std::size_t>(j)] >= 0) row.push_back(remap[static_cast<std::size_t>(j)]);
    }
    if (row.empty()) continue;
    words.push_back(set.word(i));
    rows.push_back(std::move(row));
  }
  if (words.empty()) {
    throw Error(Errc::EmptyDataset, "no words left after filtering sememes with min_count " +
                                        std::to_string(min_count));
  }
  return AnnotationSet(std::move(words), std::move(sememes), std::move(rows));
}

DatasetSplit split_dataset(const AnnotationSet& set, SplitSizes sizes, std::uint64_t seed) {
  if (sizes.train < 0 || sizes.dev < 0 || sizes.test < 0) {
    throw Error(Errc::Config, "split sizes must be non-negative");
  }
  const Index wanted = sizes.train + sizes.dev + sizes.test;
  if (wanted > set.word_count()) {
    throw Error(Errc::InsufficientWords, "split sizes sum to " + std::to_string(wanted) +
                                             " but only " + std::to_string(set.word_count()) +
                                             " words are available");
  }
  std::vector<Index> order(static_cast<std::size_t>(set.word_count()));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  rng.shuffle(order);

  const auto part = [&](Index begin, Index count) {
    std::vector<Index> ids(order.begin() + begin, order.begin() + begin + count);
    std::sort(ids.begin(), ids.end());
    return set.subset(ids);
  };
  DatasetSplit split;
  split.train = part(0, sizes.train);
  split.dev = part(sizes.train, sizes.dev);
  split.test = part(sizes.train + sizes.dev, sizes.test);
  split.seed = seed;
  return split;
}

SememeCorrelation::SememeCorrelation(Index sememe_count, Index word_count, std::vector<Entry> entries)
    : sememe_count_(sememe_count), word_count_(word_count), entries_(std::move(entries)) {
  for (auto& e : entries_) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first < 0 || e.second >= sememe_count_) {
      throw Error(Errc::IndexMismatch, "correlation entry out of range");
    }
    if (!std::isfinite(e.value)) throw Error(Errc::MalformedLine, "non-finite correlation value");
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  });
  for (std::size_t n = 1; n < entries_.size(); ++n) {
    if (entries_[n].first == entries_[n - 1].first && entries_[n].second == entries_[n - 1].second) {
      throw Error(Errc::DuplicateWord, "duplicate correlation pair");
    }
  }
}

std::optional<double> SememeCorrelation::value(Index j, Index k) const {
  if (j > k) std::swap(j, k);
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{j, k},
                                   [](const Entry& e, const std::pair<Index, Index>& key) {
                                     return std::tie(e.first, e.second) < std::tie(key.first, key.second);
                                   });
  if (it == entries_.end() || it->first != j || it->second != k) return std::nullopt;
  return it->value;
}

Matrix SememeCorrelation::dense() const {
  Matrix c = Matrix::Zero(sememe_count_, sememe_count_);
  for (const auto& e : entries_) {
    c(e.first, e.second) = e.value;
    c(e.second, e.first) = e.value;
  }
  return c;
}

SememeCorrelation compute_pmi(const AnnotationSet& train) {
  if (train.empty()) throw Error(Errc::EmptyDataset, "cannot compute PMI on an empty word set");
  std::vector<double> single(static_cast<std::size_t>(train.sememe_count()), 0.0);
  std::map<std::pair<Index, Index>, double> joint;
  for (Index i = 0; i < train.word_count(); ++i) {
    const auto row = train.sememes_of(i);
    for (std::size_t a = 0; a < row.size(); ++a) {
      single[static_cast<std::size_t>(row[a])] += 1.0;
      for (std::size_t b = a; b < row.size(); ++b) joint[{row[a], row[b]}] += 1.0;
    }
  }
  const double n = static_cast<double>(train.word_count());
  std::vector<SememeCorrelation::Entry> entries;
  entries.reserve(joint.size());
  for (const auto& [pair, count] : joint) {
    const double pmi = std::log(count * n / (single[static_cast<std::size_t>(pair.first)] *
                                             single[static_cast<std::size_t>(pair.second)]));
    entries.push_back({pair.first, pair.second, pmi});
  }
  return SememeCorrelation(train.sememe_count(), train.word_count(), std::move(entries));
}

void write_correlation(std::ostream& out, const SememeCorrelation& corr) {
  out << "words\t" << corr.word_count() << '\n';
  for (const auto& e : corr.entries()) {
    out << e.first << '\t' << e.second << '\t' << format_real(e.value) << '\n';
  }
}

SememeCorrelation read_correlation(std::istream& in, Index sememe_count, const std::string& source) {
  std::string line;
  long long line_no = 0;
  Index words = -1;
  std::vector<SememeCorrelation::Entry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_on(trim(line), '\t');
    if (fields.size() == 1 && fields[0].empty()) continue;
    const auto fail = [&] {
      return Error(Errc::MalformedLine, source + ":" + std::to_string(line_no) + ": bad correlation row");
    };
    long long a = 0;
    long long b = 0;
    double v = 0;
    if (words < 0) {
      if (fields.size() != 2 || fields[0] != "words" || !parse_integer(fields[1], a)) throw fail();
      words = a;
      continue;
    }
    if (fields.size() != 3 || !parse_integer(fields[0], a) || !parse_integer(fields[1], b) ||
        !parse_real(fields[2], v)) {
      throw fail();
    }
    entries.push_back({a, b, v});
  }
  if (words < 0) throw Error(Errc::EmptyDataset, source + ": missing correlation header");
  return SememeCorrelation(sememe_count, words, std::move(entries));
}

std::uint64_t CorpusFrequencies::count(std::string_view word) const {
  const auto it = counts_.find(std::string(word));
  return it == counts_.end() ? 0 : it->second;
}

CorpusFrequencies read_corpus_frequencies(std::istream& in) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string token;
  while (in >> token) ++counts[token];
  return CorpusFrequencies(std::move(counts));
}

CorpusFrequencies load_corpus_frequencies(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_corpus_frequencies(in);
}

}  // namespace sememe
