// Naive reference implementations used as test oracles. Each one follows the
// defining formula literally with explicit loops and shares no code with the
// library beyond the data containers.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sememe/embeddings.hpp"
#include "sememe/factorization.hpp"
#include "sememe/internal.hpp"
#include "sememe/kb.hpp"
#include "sememe/utf8.hpp"

namespace oracle {

using sememe::Index;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::vector<double> to_std(const Eigen::Ref<const sememe::Vector>& v) {
  return {v.data(), v.data() + v.size()};
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return dot(a, b) / (std::sqrt(dot(a, a)) * std::sqrt(dot(b, b)));
}

// Character sets at Begin, Middle and End of a word.
inline std::vector<std::set<std::string>> position_sets(const std::string& word) {
  const auto chars = sememe::split_characters(word);
  std::vector<std::set<std::string>> sets(3);
  if (chars.empty()) return sets;
  sets[0].insert(chars.front());
  sets[2].insert(chars.back());
  for (std::size_t i = 1; i + 1 < chars.size(); ++i) sets[1].insert(chars[i]);
  return sets;
}

// Scores by filtering over every train word directly.
inline std::vector<double> spwcf(const sememe::AnnotationSet& train, const std::string& word) {
  const auto m = static_cast<std::size_t>(train.sememe_count());
  std::vector<double> score(m, 0.0);
  const auto query = position_sets(word);
  for (int p = 0; p < 3; ++p) {
    for (const auto& c : query[static_cast<std::size_t>(p)]) {
      std::vector<double> numerator(m, 0.0);
      double normalizer = 0.0;
      for (Index i = 0; i < train.word_count(); ++i) {
        if (!position_sets(train.word(i))[static_cast<std::size_t>(p)].contains(c)) continue;
        for (Index j = 0; j < train.sememe_count(); ++j) {
          if (train.annotated(i, j)) {
            numerator[static_cast<std::size_t>(j)] += 1.0;
            normalizer += 1.0;
          }
        }
      }
      if (normalizer == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) score[j] += numerator[j] / normalizer;
    }
  }
  return score;
}

struct NaiveNeighbor {
  std::string word;
  double similarity;
};

inline std::vector<NaiveNeighbor> nearest(const std::vector<double>& query, const sememe::WordEmbeddings& table,
                                          std::size_t k, const std::string& exclude = {}) {
  std::vector<NaiveNeighbor> all;
  for (Index i = 0; i < table.size(); ++i) {
    if (table.word(i) == exclude) continue;
    all.push_back({table.word(i), cosine(query, to_std(table.vector(i)))});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.word < b.word;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

inline std::vector<double> spwe(const std::vector<double>& query, const sememe::AnnotationSet& train,
                                const sememe::WordEmbeddings& emb, double c, std::size_t k,
                                const std::string& exclude = {}) {
  std::vector<double> score(static_cast<std::size_t>(train.sememe_count()), 0.0);
  const auto neighbors = nearest(query, emb.restrict_to(train.words()), k, exclude);
  for (std::size_t r = 0; r < neighbors.size(); ++r) {
    const auto i = *train.find_word(neighbors[r].word);
    for (Index j = 0; j < train.sememe_count(); ++j) {
      if (train.annotated(i, j)) {
        score[static_cast<std::size_t>(j)] += neighbors[r].similarity * std::pow(c, static_cast<double>(r + 1));
      }
    }
  }
  return score;
}

// Exhaustive (k, r) search minimizing 1 - cos, first minimum kept.
struct Choice {
  Index position;
  int label;
};

inline Choice exhaustive_prototype(const std::string& word, const std::vector<double>& sememe_vec,
                                   const sememe::CharEmbeddings& chars) {
  const auto letters = sememe::split_characters(word);
  Choice best{-1, 0};
  double best_distance = 0.0;
  for (std::size_t k = 0; k < letters.size(); ++k) {
    const auto id = chars.find(letters[k]);
    if (!id) continue;
    for (int r = 1; r <= chars.n_prototypes(); ++r) {
      const auto& protos = chars.prototypes(*id);
      const auto it = std::find_if(protos.begin(), protos.end(), [r](const auto& p) { return p.label == r; });
      if (it == protos.end()) continue;
      const double distance = 1.0 - cosine(to_std(chars.vector(it->row)), sememe_vec);
      if (best.position < 0 || distance < best_distance) {
        best = {static_cast<Index>(k), r};
        best_distance = distance;
      }
    }
  }
  return best;
}

inline std::vector<double> prototype_vector(const std::string& word, const Choice& choice,
                                            const sememe::CharEmbeddings& chars) {
  const auto letters = sememe::split_characters(word);
  const auto id = *chars.find(letters[static_cast<std::size_t>(choice.position)]);
  for (const auto& p : chars.prototypes(id)) {
    if (p.label == choice.label) return to_std(chars.vector(p.row));
  }
  return {};
}

inline std::vector<double> row(const sememe::RowMatrix& m, Index r) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Index d = 0; d < m.cols(); ++d) out[static_cast<std::size_t>(d)] = m(r, d);
  return out;
}

inline std::vector<double> combined_row(const sememe::FactorParams& p, Index j) {
  auto a = row(p.sememe_vectors, j);
  const auto b = row(p.context_vectors, j);
  for (std::size_t d = 0; d < a.size(); ++d) a[d] += b[d];
  return a;
}

// Correlation term over every ordered sememe pair, unstored entries as zero.
inline double correlation_loss(const sememe::FactorParams& p, const sememe::SememeCorrelation& corr, double lambda) {
  double total = 0.0;
  const Index m = p.sememe_vectors.rows();
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      const double target = corr.value(j, k).value_or(0.0);
      const double e = dot(row(p.sememe_vectors, j), row(p.context_vectors, k)) - target;
      total += lambda * e * e;
    }
  }
  return total;
}

// Word-sememe squared error over every cell plus the correlation term.
inline double spse_loss(const sememe::FactorParams& p, const sememe::AnnotationSet& rows,
                        const sememe::WordEmbeddings& emb, const sememe::SememeCorrelation& corr, double lambda) {
  double total = 0.0;
  for (Index i = 0; i < rows.word_count(); ++i) {
    const auto w = to_std(emb.vector(*emb.find(rows.word(i))));
    for (Index j = 0; j < rows.sememe_count(); ++j) {
      const double target = rows.annotated(i, j) ? 1.0 : 0.0;
      const double e = dot(w, combined_row(p, j)) + p.row_bias(i) + p.sememe_bias(j) - target;
      total += e * e;
    }
  }
  return total + correlation_loss(p, corr, lambda);
}

// Same with character prototypes chosen by `choose(word_index, sememe)`.
inline double spcse_loss(const sememe::FactorParams& p, const sememe::AnnotationSet& rows,
                         const sememe::CharEmbeddings& chars, const sememe::SememeCorrelation& corr, double lambda,
                         const std::function<Choice(Index, Index)>& choose) {
  double total = 0.0;
  for (Index i = 0; i < rows.word_count(); ++i) {
    const auto letters = sememe::split_characters(rows.word(i));
    for (Index j = 0; j < rows.sememe_count(); ++j) {
      const auto choice = choose(i, j);
      const auto c = prototype_vector(rows.word(i), choice, chars);
      const auto char_id = *chars.find(letters[static_cast<std::size_t>(choice.position)]);
      const double target = rows.annotated(i, j) ? 1.0 : 0.0;
      const double e = dot(c, combined_row(p, j)) + p.row_bias(char_id) + p.sememe_bias(j) - target;
      total += e * e;
    }
  }
  return total + correlation_loss(p, corr, lambda);
}

// Central differences of `f` with respect to every entry of `p`.
inline sememe::FactorParams numeric_gradient(const sememe::FactorParams& p,
                                             const std::function<double(const sememe::FactorParams&)>& f,
                                             double h = 1e-6) {
  sememe::FactorParams grad = sememe::zeros_like(p);
  sememe::FactorParams probe = p;
  const auto visit = [&](auto& param, auto& out) {
    for (Index n = 0; n < param.size(); ++n) {
      double& x = param.data()[n];
      const double saved = x;
      x = saved + h;
      const double up = f(probe);
      x = saved - h;
      const double down = f(probe);
      x = saved;
      out.data()[n] = (up - down) / (2.0 * h);
    }
  };
  visit(probe.sememe_vectors, grad.sememe_vectors);
  visit(probe.context_vectors, grad.context_vectors);
  visit(probe.row_bias, grad.row_bias);
  visit(probe.sememe_bias, grad.sememe_bias);
  return grad;
}

// ||a - b|| / max(||a||, ||b||) over all parameters taken as one vector.
inline double relative_error(const sememe::FactorParams& a, const sememe::FactorParams& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  const auto scan = [&](const auto& x, const auto& y) {
    for (Index n = 0; n < x.size(); ++n) {
      const double u = x.data()[n];
      const double v = y.data()[n];
      diff += (u - v) * (u - v);
      na += u * u;
      nb += v * v;
    }
  };
  scan(a.sememe_vectors, b.sememe_vectors);
  scan(a.context_vectors, b.context_vectors);
  scan(a.row_bias, b.row_bias);
  scan(a.sememe_bias, b.sememe_bias);
  const double scale = std::sqrt(std::max(na, nb));
  return scale == 0.0 ? std::sqrt(diff) : std::sqrt(diff) / scale;
}

// Average precision from a full ranking, by the textbook definition.
inline double average_precision(const std::vector<Index>& ranking, const std::set<Index>& gold) {
  double sum = 0.0;
  for (std::size_t r = 0; r < ranking.size(); ++r) {
    if (!gold.contains(ranking[r])) continue;
    std::size_t hits = 0;
    for (std::size_t q = 0; q <= r; ++q) hits += gold.contains(ranking[q]) ? 1 : 0;
    sum += static_cast<double>(hits) / static_cast<double>(r + 1);
  }
  return sum / static_cast<double>(gold.size());
}

}  // namespace oracle
