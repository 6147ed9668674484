#include "sememe/embeddings.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "sememe/io.hpp"
#include "sememe/utf8.hpp"

namespace sememe {

WordEmbeddings::WordEmbeddings(std::vector<std::string> words, RowMatrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<Index>(words_.size()) != vectors_.rows()) {
    throw Error(Errc::DimensionMismatch, "word list and vector table differ in length");
  }
  norms_ = vectors_.rowwise().norm();
  for (Index i = 0; i < size(); ++i) {
    if (!index_.emplace(words_[static_cast<std::size_t>(i)], i).second) {
      throw Error(Errc::DuplicateWord, "duplicate embedding for '" + word(i) + "'");
    }
    if (!vectors_.row(i).allFinite()) throw Error(Errc::MalformedLine, "non-finite vector for '" + word(i) + "'");
    if (norms_(i) == 0.0) throw Error(Errc::ZeroVector, "all-zero vector for '" + word(i) + "'");
  }
}

std::optional<Index> WordEmbeddings::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordEmbeddings WordEmbeddings::restrict_to(const std::vector<std::string>& words) const {
  std::vector<std::string> kept;
  std::vector<Index> rows;
  for (const auto& w : words) {
    if (const auto i = find(w)) {
      kept.push_back(w);
      rows.push_back(*i);
    }
  }
  RowMatrix sub(static_cast<Index>(rows.size()), dim());
  for (std::size_t n = 0; n < rows.size(); ++n) sub.row(static_cast<Index>(n)) = vectors_.row(rows[n]);
  return WordEmbeddings(std::move(kept), std::move(sub));
}

WordEmbeddings read_word_embeddings(std::istream& in, Index dim, const std::string& source) {
  if (dim < 1) throw Error(Errc::Config, "embedding dimension must be positive");
  std::vector<std::string> words;
  std::vector<double> values;
  std::unordered_map<std::string, long long> seen;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no);
    if (static_cast<Index>(tokens.size()) != dim + 1) {
      throw Error(Errc::DimensionMismatch, where + ": expected " + std::to_string(dim) + " values, got " +
                                               std::to_string(tokens.size() - 1));
    }
    std::string word(tokens[0]);
    if (!seen.emplace(word, line_no).second) {
      throw Error(Errc::DuplicateWord, where + ": duplicate word '" + word + "' (first on line " +
                                           std::to_string(seen[word]) + ")");
    }
    bool nonzero = false;
    for (std::size_t n = 1; n < tokens.size(); ++n) {
      double v;
      if (!parse_real(tokens[n], v)) {
        throw Error(Errc::MalformedLine, where + ": cannot parse '" + std::string(tokens[n]) + "'");
      }
      nonzero = nonzero || v != 0.0;
      values.push_back(v);
    }
    if (!nonzero) throw Error(Errc::ZeroVector, where + ": all-zero vector for '" + word + "'");
    words.push_back(std::move(word));
  }
  RowMatrix table = Eigen::Map<RowMatrix>(values.data(), static_cast<Index>(words.size()), dim);
  return WordEmbeddings(std::move(words), std::move(table));
}

WordEmbeddings load_word_embeddings(const std::filesystem::path& path, Index dim) {
  auto in = open_input(path);
  return read_word_embeddings(in, dim, path.string());
}

void write_word_embeddings(std::ostream& out, const WordEmbeddings& emb) {
  for (Index i = 0; i < emb.size(); ++i) {
    out << emb.word(i);
    for (Index d = 0; d < emb.dim(); ++d) out << ' ' << format_real(emb.matrix()(i, d));
    out << '\n';
  }
}

CharEmbeddings::CharEmbeddings(Index dim, int n_prototypes, std::vector<Entry> entries)
    : dim_(dim), n_prototypes_(n_prototypes) {
  if (dim < 1) throw Error(Errc::Config, "character embedding dimension must be positive");
  if (n_prototypes < 1) throw Error(Errc::Config, "n_prototypes must be positive");
  vectors_.resize(static_cast<Index>(entries.size()), dim);
  std::map<std::pair<Index, int>, Index> seen;
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const auto& e = entries[n];
    decode_scalar(e.character);
    if (e.label < 1 || e.label > n_prototypes) {
      throw Error(Errc::PrototypeOutOfRange, "prototype index " + std::to_string(e.label) + " of '" +
                                                 e.character + "' outside 1.." + std::to_string(n_prototypes));
    }
    if (e.vector.size() != dim) {
      throw Error(Errc::DimensionMismatch, "vector for '" + e.character + "' has length " +
                                               std::to_string(e.vector.size()));
    }
    if (e.vector.isZero(0.0)) throw Error(Errc::ZeroVector, "all-zero vector for '" + e.character + "'");
    auto [it, inserted] = index_.emplace(e.character, static_cast<Index>(characters_.size()));
    if (inserted) {
      characters_.push_back(e.character);
      prototypes_.emplace_back();
    }
    if (!seen.emplace(std::pair{it->second, e.label}, static_cast<Index>(n)).second) {
      throw Error(Errc::DuplicateWord, "duplicate prototype (" + e.character + ", " + std::to_string(e.label) + ")");
    }
    const auto row = static_cast<Index>(n);
    vectors_.row(row) = e.vector.transpose();
    prototypes_[static_cast<std::size_t>(it->second)].push_back({e.label, row});
  }
  for (auto& protos : prototypes_) {
    std::sort(protos.begin(), protos.end(), [](const Prototype& a, const Prototype& b) { return a.label < b.label; });
  }
}

std::optional<Index> CharEmbeddings::find(std::string_view character) const {
  const auto it = index_.find(std::string(character));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CharEmbeddings read_char_embeddings(std::istream& in, Index dim, int n_prototypes, const std::string& source) {
  std::vector<CharEmbeddings::Entry> entries;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_whitespace(line);
    if (tokens.empty()) continue;
    const auto where = source + ":" + std::to_string(line_no);
    if (static_cast<Index>(tokens.size()) != dim + 2) {
      throw Error(Errc::DimensionMismatch, where + ": expected character, prototype index and " +
                                               std::to_string(dim) + " values");
    }
    long long label;
    if (!parse_integer(tokens[1], label)) {
      throw Error(Errc::MalformedLine, where + ": bad prototype index '" + std::string(tokens[1]) + "'");
    }
    if (label < 1 || label > n_prototypes) {
      throw Error(Errc::PrototypeOutOfRange, where + ": prototype index " + std::to_string(label) +
                                                 " outside 1.." + std::to_string(n_prototypes));
    }
    Vector v(dim);
    for (Index d = 0; d < dim; ++d) {
      if (!parse_real(tokens[static_cast<std::size_t>(d + 2)], v(d))) {
        throw Error(Errc::MalformedLine, where + ": cannot parse value " + std::to_string(d + 1));
      }
    }
    try {
      decode_scalar(tokens[0]);
    } catch (const Error&) {
      throw Error(Errc::MalformedLine, where + ": '" + std::string(tokens[0]) + "' is not a single character");
    }
    entries.push_back({std::string(tokens[0]), static_cast<int>(label), std::move(v)});
  }
  try {
    return CharEmbeddings(dim, n_prototypes, std::move(entries));
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
}

CharEmbeddings load_char_embeddings(const std::filesystem::path& path, Index dim, int n_prototypes) {
  auto in = open_input(path);
  return read_char_embeddings(in, dim, n_prototypes, path.string());
}

void write_char_embeddings(std::ostream& out, const CharEmbeddings& chars) {
  for (Index c = 0; c < chars.character_count(); ++c) {
    for (const auto& p : chars.prototypes(c)) {
      out << chars.character(c) << ' ' << p.label;
      for (Index d = 0; d < chars.dim(); ++d) out << ' ' << format_real(chars.matrix()(p.row, d));
      out << '\n';
    }
  }
}

NeighborList nearest_words(const Eigen::Ref<const Vector>& query, const WordEmbeddings& table, Index k,
                           const std::set<std::string, std::less<>>& exclude) {
  if (k < 1) throw Error(Errc::Config, "neighbor count must be >= 1");
  if (table.empty()) throw Error(Errc::NoNeighbors, "empty embedding table");
  if (query.size() != table.dim()) {
    throw Error(Errc::DimensionMismatch, "query has length " + std::to_string(query.size()) + ", table has " +
                                             std::to_string(table.dim()));
  }
  const double qnorm = query.norm();
  if (qnorm == 0.0) throw Error(Errc::ZeroVector, "zero query vector");

  std::vector<Index> candidates;
  std::vector<double> sims(static_cast<std::size_t>(table.size()));
  candidates.reserve(sims.size());
  for (Index i = 0; i < table.size(); ++i) {
    if (!exclude.empty() && exclude.contains(table.word(i))) continue;
    sims[static_cast<std::size_t>(i)] = table.vector(i).dot(query) / (table.norm(i) * qnorm);
    candidates.push_back(i);
  }
  const auto better = [&](Index a, Index b) {
    const double sa = sims[static_cast<std::size_t>(a)];
    const double sb = sims[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return table.word(a) < table.word(b);
  };
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                    better);

  NeighborList out;
  out.reserve(take);
  for (std::size_t n = 0; n < take; ++n) {
    const Index i = candidates[n];
    out.push_back({table.word(i), sims[static_cast<std::size_t>(i)], static_cast<Index>(n + 1), i});
  }
  return out;
}

}  // namespace sememe
