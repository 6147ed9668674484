#ifndef SEMEME_FACTORIZATION_HPP
#define SEMEME_FACTORIZATION_HPP

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sememe/kb.hpp"
#include "sememe/random.hpp"
#include "sememe/types.hpp"

namespace sememe {

/// Parameters shared by the two sememe factorization models: dual sememe
/// tables, one bias per row entity (word or character), one per sememe.
struct FactorParams {
  RowMatrix sememe_vectors;   // m x d
  RowMatrix context_vectors;  // m x d
  Vector row_bias;            // one per word / character
  Vector sememe_bias;         // m

  Index dim() const { return sememe_vectors.cols(); }
  bool all_finite() const;
  /// sememe_vectors + context_vectors, the per-sememe scoring direction.
  RowMatrix combined() const { return sememe_vectors + context_vectors; }

  friend bool operator==(const FactorParams&, const FactorParams&) = default;
};

/// Uniform in [-0.5/d, 0.5/d] for both tables, zero biases.
FactorParams init_factor_params(Index sememes, Index rows, Index dim, Rng& rng);
FactorParams zeros_like(const FactorParams& p);

/// Called with (epoch, full objective) after initialization (epoch 0) and
/// after each training epoch.
using EpochObserver = std::function<void(int epoch, double loss)>;

namespace detail {

/// Linear decay from lr0 at the first epoch to lr0/10 at the last.
double learning_rate(double lr0, int epoch, int epochs);

struct Cell {
  Index row;
  Index col;
  double target;
};

/// Ordered sememe pairs visited in one epoch: every stored correlation in
/// both orders (diagonal once) plus unobserved pairs sampled with
/// probability `zero_prob`, target 0.
std::vector<Cell> correlation_cells(const SememeCorrelation& corr, double zero_prob, Rng& rng);

/// Word-sememe cells visited in one epoch: every annotated cell (target 1)
/// plus unannotated cells sampled with probability `zero_prob` (target 0).
std::vector<Cell> annotation_cells(const AnnotationSet& rows, double zero_prob, Rng& rng);

/// One SGD step on weight * (s_j . sbar_k - target)^2.
void correlation_step(FactorParams& p, const Cell& cell, double weight, double lr);

/// weight * sum over all ordered pairs of (s_j . sbar_k - C_jk)^2.
double correlation_objective(const FactorParams& p, const Matrix& dense_corr, double weight);
void add_correlation_gradient(const FactorParams& p, const Matrix& dense_corr, double weight, FactorParams& grad);

void require_finite(const FactorParams& p, const std::string& model, int epoch);

}  // namespace detail

/// Text checkpoint: header, dimensions, then one line per sememe and one per
/// row entity. Values are written in shortest round-trip form.
void write_factor_checkpoint(std::ostream& out, const std::string& kind, const std::vector<std::string>& sememes,
                             const std::vector<std::string>& row_keys, const FactorParams& params);

struct FactorCheckpoint {
  std::string kind;
  std::vector<std::string> sememes;
  std::vector<std::string> row_keys;
  FactorParams params;
};

FactorCheckpoint read_factor_checkpoint(std::istream& in, const std::string& source = "<stream>");

}  // namespace sememe

#endif  // SEMEME_FACTORIZATION_HPP
