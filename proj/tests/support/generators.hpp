// Seeded random instances for property tests.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "sememe/embeddings.hpp"
#include "sememe/kb.hpp"
#include "sememe/random.hpp"
#include "sememe/utf8.hpp"

namespace gen {

using sememe::Index;
using sememe::Rng;

// A small alphabet of CJK characters starting at U+4E00.
inline std::string cjk(std::uint64_t n) {
  const auto cp = static_cast<char32_t>(0x4E00 + n);
  std::string out;
  out += static_cast<char>(0xE0 | (cp >> 12));
  out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
  out += static_cast<char>(0x80 | (cp & 0x3F));
  return out;
}

inline std::vector<std::string> sememe_names(Index m) {
  std::vector<std::string> names;
  for (Index j = 0; j < m; ++j) names.push_back("s" + std::to_string(j));
  return names;
}

// Distinct words of 1..max_len characters from an alphabet of `alphabet` letters.
inline std::vector<std::string> random_words(Rng& rng, Index n, std::uint64_t alphabet, std::uint64_t max_len) {
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (static_cast<Index>(words.size()) < n) {
    const auto len = 1 + rng.below(max_len);
    std::string w;
    for (std::uint64_t k = 0; k < len; ++k) w += cjk(rng.below(alphabet));
    if (seen.insert(w).second) words.push_back(w);
  }
  return words;
}

// Random annotations: each word gets 1..max_per_word sememes out of m.
inline sememe::AnnotationSet random_annotations(Rng& rng, const std::vector<std::string>& words, Index m,
                                                Index max_per_word) {
  std::vector<std::vector<Index>> rows;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::vector<Index> row;
    const auto count = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(max_per_word)));
    for (Index n = 0; n < count; ++n) row.push_back(static_cast<Index>(rng.below(static_cast<std::uint64_t>(m))));
    rows.push_back(row);
  }
  return {words, sememe_names(m), rows};
}

inline sememe::Vector random_vector(Rng& rng, Index dim, double scale = 1.0) {
  sememe::Vector v(dim);
  do {
    for (Index d = 0; d < dim; ++d) v(d) = rng.uniform(-scale, scale);
  } while (v.norm() == 0.0);
  return v;
}

inline sememe::WordEmbeddings random_word_embeddings(Rng& rng, const std::vector<std::string>& words, Index dim,
                                                     double scale = 1.0) {
  sememe::RowMatrix m(static_cast<Index>(words.size()), dim);
  for (Index i = 0; i < m.rows(); ++i) m.row(i) = random_vector(rng, dim, scale).transpose();
  return {words, m};
}

// Every character of `words` gets 1..n_prototypes random prototypes.
inline sememe::CharEmbeddings random_char_embeddings(Rng& rng, const std::vector<std::string>& words, Index dim,
                                                     int n_prototypes, double scale = 1.0,
                                                     bool all_prototypes = false) {
  std::set<std::string> chars;
  for (const auto& w : words) {
    for (const auto& c : sememe::split_characters(w)) chars.insert(c);
  }
  std::vector<sememe::CharEmbeddings::Entry> entries;
  for (const auto& c : chars) {
    const int count = all_prototypes ? n_prototypes : 1 + static_cast<int>(rng.below(n_prototypes));
    for (int r = 1; r <= count; ++r) entries.push_back({c, r, random_vector(rng, dim, scale)});
  }
  return {dim, n_prototypes, entries};
}

}  // namespace gen
