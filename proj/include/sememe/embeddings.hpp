#ifndef SEMEME_EMBEDDINGS_HPP
#define SEMEME_EMBEDDINGS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sememe/error.hpp"
#include "sememe/types.hpp"

namespace sememe {

/// Cosine similarity of two equal-length, nonzero vectors.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& u, const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  if (u.size() != v.size()) {
    throw Error(Errc::DimensionMismatch, "cosine of vectors with lengths " + std::to_string(u.size()) +
                                             " and " + std::to_string(v.size()));
  }
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) throw Error(Errc::ZeroVector, "cosine of a zero vector");
  return u.dot(v) / (nu * nv);
}

/// Dense word vectors, one row per word, all of the same dimension.
class WordEmbeddings {
public:
  WordEmbeddings() = default;
  /// Throws DuplicateWord, DimensionMismatch, or ZeroVector.
  WordEmbeddings(std::vector<std::string> words, RowMatrix vectors);

  Index dim() const { return vectors_.cols(); }
  Index size() const { return vectors_.rows(); }
  bool empty() const { return size() == 0; }

  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(Index i) const { return words_[static_cast<std::size_t>(i)]; }
  std::optional<Index> find(std::string_view word) const;

  auto vector(Index i) const { return vectors_.row(i).transpose(); }
  double norm(Index i) const { return norms_(i); }
  const RowMatrix& matrix() const { return vectors_; }

  /// Rows for the given words, in order; words without vectors are skipped.
  WordEmbeddings restrict_to(const std::vector<std::string>& words) const;

private:
  std::vector<std::string> words_;
  RowMatrix vectors_;
  Vector norms_;
  std::unordered_map<std::string, Index> index_;
};

/// Reads GloVe-style `word v1 ... v_dim` lines (no header).
WordEmbeddings read_word_embeddings(std::istream& in, Index dim, const std::string& source = "<stream>");
WordEmbeddings load_word_embeddings(const std::filesystem::path& path, Index dim);
void write_word_embeddings(std::ostream& out, const WordEmbeddings& emb);

/// Multi-prototype character vectors. Each character has between one and
/// `n_prototypes` vectors, labelled 1..n_prototypes.
class CharEmbeddings {
public:
  struct Prototype {
    int label;  // 1-based prototype index
    Index row;  // row in matrix()
  };

  struct Entry {
    std::string character;
    int label;
    Vector vector;
  };

  CharEmbeddings() = default;
  CharEmbeddings(Index dim, int n_prototypes, std::vector<Entry> entries);

  Index dim() const { return dim_; }
  int n_prototypes() const { return n_prototypes_; }
  Index character_count() const { return static_cast<Index>(characters_.size()); }
  Index prototype_count() const { return vectors_.rows(); }

  const std::vector<std::string>& characters() const { return characters_; }
  const std::string& character(Index id) const { return characters_[static_cast<std::size_t>(id)]; }
  std::optional<Index> find(std::string_view character) const;
  /// Prototypes of character `id`, by ascending label.
  const std::vector<Prototype>& prototypes(Index id) const { return prototypes_[static_cast<std::size_t>(id)]; }

  auto vector(Index row) const { return vectors_.row(row).transpose(); }
  const RowMatrix& matrix() const { return vectors_; }

private:
  Index dim_ = 0;
  int n_prototypes_ = 0;
  std::vector<std::string> characters_;
  std::vector<std::vector<Prototype>> prototypes_;
  std::unordered_map<std::string, Index> index_;
  RowMatrix vectors_;
};

/// Reads `char proto_index v1 ... v_dim` lines.
CharEmbeddings read_char_embeddings(std::istream& in, Index dim, int n_prototypes,
                                    const std::string& source = "<stream>");
CharEmbeddings load_char_embeddings(const std::filesystem::path& path, Index dim, int n_prototypes);
void write_char_embeddings(std::ostream& out, const CharEmbeddings& chars);

struct Neighbor {
  std::string word;
  double similarity;
  Index rank;  // 1-based
  Index row;   // row in the searched table
};

using NeighborList = std::vector<Neighbor>;

/// Exact top-k of `table` by cosine to `query`, excluding `exclude`. Ties in
/// similarity are broken by ascending word.
NeighborList nearest_words(const Eigen::Ref<const Vector>& query, const WordEmbeddings& table, Index k,
                           const std::set<std::string, std::less<>>& exclude = {});

}  // namespace sememe

#endif  // SEMEME_EMBEDDINGS_HPP
