#include "sememe/external.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "sememe/error.hpp"
#include "sememe/io.hpp"

namespace sememe {

void SpweConfig::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw Error(Errc::Config, "SPWE discount c must lie in (0, 1)");
  if (k < 1) throw Error(Errc::Config, "SPWE neighbor count K must be >= 1");
}

SpweModel::SpweModel(const AnnotationSet& train, const WordEmbeddings& emb, SpweConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  neighbors_ = emb.restrict_to(train.words());
  std::vector<Index> rows;
  rows.reserve(static_cast<std::size_t>(neighbors_.size()));
  for (const auto& w : neighbors_.words()) rows.push_back(*train.find_word(w));
  train_ = train.subset(rows);
  skipped_ = train.word_count() - train_.word_count();
}

ScoreVector SpweModel::score(const Eigen::Ref<const Vector>& word_vec, std::string_view exclude_word) const {
  if (neighbors_.empty()) throw Error(Errc::NoNeighbors, "no train word has an embedding");
  std::set<std::string, std::less<>> exclude;
  if (!exclude_word.empty()) exclude.emplace(exclude_word);
  const auto list = nearest_words(word_vec, neighbors_, cfg_.k, exclude);

  ScoreVector out;
  out.scores = Vector::Zero(train_.sememe_count());
  double discount = 1.0;
  for (const auto& nb : list) {
    discount *= cfg_.c;
    const double weight = nb.similarity * discount;
    for (Index j : train_.sememes_of(nb.row)) out.scores(j) += weight;
  }
  return out;
}

ScoreVector spwe_score(const Eigen::Ref<const Vector>& word_vec, const AnnotationSet& train,
                       const WordEmbeddings& emb, const SpweConfig& cfg) {
  return SpweModel(train, emb, cfg).score(word_vec);
}

void SpseHyper::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw Error(Errc::Config, "SPSE lambda must be >= 0");
  if (!(zero_sample_prob >= 0.0 && zero_sample_prob <= 1.0)) {
    throw Error(Errc::Config, "SPSE zero sampling probability must lie in [0, 1]");
  }
  if (epochs < 0) throw Error(Errc::Config, "SPSE epochs must be >= 0");
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw Error(Errc::Config, "SPSE learning rate must be positive");
}

SpseData make_spse_data(const AnnotationSet& train, const SememeCorrelation& corr, const WordEmbeddings& emb) {
  if (corr.sememe_count() != train.sememe_count()) {
    throw Error(Errc::IndexMismatch, "correlation matrix and annotations disagree on the sememe inventory");
  }
  SpseData data;
  const WordEmbeddings covered = emb.restrict_to(train.words());
  std::vector<Index> rows;
  for (const auto& w : covered.words()) rows.push_back(*train.find_word(w));
  if (rows.empty()) throw Error(Errc::NoNeighbors, "no train word has an embedding");
  data.rows = train.subset(rows);
  data.features = covered.matrix();
  data.correlation = corr.dense();
  data.dropped = train.word_count() - data.rows.word_count();
  return data;
}

namespace {

constexpr Index kChunk = 1024;

// Residual block R = X V^T + b_rows + b_sem - M for rows [begin, begin + count).
Matrix residual_block(const SpseModel& model, const SpseData& data, const RowMatrix& combined, Index begin,
                      Index count) {
  Matrix r = data.features.middleRows(begin, count) * combined.transpose();
  r.colwise() += model.params.row_bias.segment(begin, count);
  r.rowwise() += model.params.sememe_bias.transpose();
  for (Index i = 0; i < count; ++i) {
    for (Index j : data.rows.sememes_of(begin + i)) r(i, j) -= 1.0;
  }
  return r;
}

void check_shapes(const SpseModel& model, const SpseData& data) {
  if (model.params.row_bias.size() != data.rows.word_count() ||
      model.params.sememe_bias.size() != data.rows.sememe_count() || model.dim() != data.features.cols()) {
    throw Error(Errc::IndexMismatch, "SPSE model does not match its training data");
  }
}

}  // namespace

double spse_objective(const SpseModel& model, const SpseData& data, double lambda) {
  check_shapes(model, data);
  const RowMatrix combined = model.params.combined();
  double total = 0.0;
  for (Index begin = 0; begin < data.rows.word_count(); begin += kChunk) {
    const Index count = std::min(kChunk, data.rows.word_count() - begin);
    total += residual_block(model, data, combined, begin, count).squaredNorm();
  }
  return total + detail::correlation_objective(model.params, data.correlation, lambda);
}

FactorParams spse_gradient(const SpseModel& model, const SpseData& data, double lambda) {
  check_shapes(model, data);
  FactorParams grad = zeros_like(model.params);
  const RowMatrix combined = model.params.combined();
  for (Index begin = 0; begin < data.rows.word_count(); begin += kChunk) {
    const Index count = std::min(kChunk, data.rows.word_count() - begin);
    const Matrix r = residual_block(model, data, combined, begin, count);
    const Matrix g = 2.0 * r.transpose() * data.features.middleRows(begin, count);
    grad.sememe_vectors += g;
    grad.context_vectors += g;
    grad.row_bias.segment(begin, count) = 2.0 * r.rowwise().sum();
    grad.sememe_bias += 2.0 * r.colwise().sum().transpose();
  }
  detail::add_correlation_gradient(model.params, data.correlation, lambda, grad);
  return grad;
}

SpseModel init_spse(const SpseData& data, std::vector<std::string> sememes, Index dim, std::uint64_t seed) {
  Rng rng(seed);
  SpseModel model;
  model.sememes = std::move(sememes);
  model.words = data.rows.words();
  model.params = init_factor_params(data.rows.sememe_count(), data.rows.word_count(), dim, rng);
  return model;
}

SpseModel train_spse(const AnnotationSet& train, const SememeCorrelation& corr, const WordEmbeddings& emb,
                     const SpseHyper& hyper, const EpochObserver& observer) {
  hyper.validate();
  const SpseData data = make_spse_data(train, corr, emb);
  SpseModel model = init_spse(data, train.sememes(), emb.dim(), hyper.seed);
  // Sampling draws from a stream separate from initialization so that the
  // initial state does not depend on the epoch count.
  Rng rng(hyper.seed ^ 0x9E3779B97F4A7C15ULL);
  if (observer) observer(0, spse_objective(model, data, hyper.lambda));

  auto& p = model.params;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double lr = detail::learning_rate(hyper.lr0, epoch, hyper.epochs);
    struct Task {
      bool annotation;
      detail::Cell cell;
    };
    std::vector<Task> tasks;
    for (const auto& c : detail::annotation_cells(data.rows, hyper.zero_sample_prob, rng)) tasks.push_back({true, c});
    if (hyper.lambda > 0.0) {
      for (const auto& c : detail::correlation_cells(corr, hyper.zero_sample_prob, rng)) tasks.push_back({false, c});
    }
    rng.shuffle(tasks);

    for (const auto& t : tasks) {
      if (!t.annotation) {
        detail::correlation_step(p, t.cell, hyper.lambda, lr);
        continue;
      }
      const Index i = t.cell.row;
      const Index j = t.cell.col;
      const auto x = data.features.row(i);
      const double err = x.dot(p.sememe_vectors.row(j) + p.context_vectors.row(j)) + p.row_bias(i) +
                         p.sememe_bias(j) - t.cell.target;
      const double g = 2.0 * err * lr;
      p.sememe_vectors.row(j) -= g * x;
      p.context_vectors.row(j) -= g * x;
      p.row_bias(i) -= g;
      p.sememe_bias(j) -= g;
    }
    detail::require_finite(p, "SPSE", epoch + 1);
    if (observer) {
      const double loss = spse_objective(model, data, hyper.lambda);
      if (!std::isfinite(loss)) {
        throw Error(Errc::NonFiniteLoss, "SPSE objective became non-finite in epoch " + std::to_string(epoch + 1));
      }
      observer(epoch + 1, loss);
    }
  }
  return model;
}

ScoreVector spse_score(const SpseModel& model, const Eigen::Ref<const Vector>& word_vec) {
  if (word_vec.size() != model.dim()) {
    throw Error(Errc::DimensionMismatch, "word vector has length " + std::to_string(word_vec.size()) +
                                             ", SPSE model has " + std::to_string(model.dim()));
  }
  ScoreVector out;
  out.scores = model.params.combined() * word_vec;
  return out;
}

void write_spse(std::ostream& out, const SpseModel& model) {
  write_factor_checkpoint(out, "spse", model.sememes, model.words, model.params);
}

SpseModel read_spse(std::istream& in, const std::string& source) {
  auto ck = read_factor_checkpoint(in, source);
  if (ck.kind != "spse") throw Error(Errc::MalformedLine, source + ": not an SPSE checkpoint");
  return SpseModel{std::move(ck.sememes), std::move(ck.row_keys), std::move(ck.params)};
}

void save_spse(const std::filesystem::path& path, const SpseModel& model) {
  auto out = open_output(path);
  write_spse(out, model);
}

SpseModel load_spse(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_spse(in, path.string());
}

}  // namespace sememe
