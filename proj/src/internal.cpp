#include "sememe/internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <istream>
#include <ostream>
#include <set>

#include "sememe/error.hpp"
#include "sememe/io.hpp"
#include "sememe/utf8.hpp"

namespace sememe {

const char* position_name(Position p) noexcept {
  switch (p) {
    case Position::Begin: return "B";
    case Position::Middle: return "M";
    case Position::End: return "E";
  }
  return "?";
}

std::vector<std::pair<std::string, Position>> character_slots(std::string_view word) {
  const auto chars = split_characters(word);
  std::vector<std::pair<std::string, Position>> slots;
  if (chars.empty()) return slots;
  slots.emplace_back(chars.front(), Position::Begin);
  std::set<std::string> middle;
  for (std::size_t n = 1; n + 1 < chars.size(); ++n) {
    if (middle.insert(chars[n]).second) slots.emplace_back(chars[n], Position::Middle);
  }
  slots.emplace_back(chars.back(), Position::End);
  return slots;
}

const PositionIndex::Bucket* PositionIndex::bucket(std::string_view character, Position p) const {
  const auto it = buckets_.find(character);
  if (it == buckets_.end()) return nullptr;
  const auto& b = it->second[static_cast<std::size_t>(p)];
  return b.normalizer == 0 ? nullptr : &b;
}

void PositionIndex::set_bucket(const std::string& character, Position p, Bucket bucket) {
  buckets_[character][static_cast<std::size_t>(p)] = std::move(bucket);
}

void PositionIndex::add(const std::string& character, Position p, std::span<const Index> sememes) {
  auto& b = buckets_[character][static_cast<std::size_t>(p)];
  for (Index j : sememes) ++b.counts[j];
  b.normalizer += static_cast<std::int64_t>(sememes.size());
}

PositionIndex build_position_index(const AnnotationSet& train) {
  PositionIndex index(train.sememe_count());
  for (Index i = 0; i < train.word_count(); ++i) {
    for (const auto& [c, p] : character_slots(train.word(i))) index.add(c, p, train.sememes_of(i));
  }
  return index;
}

ScoreVector spwcf_char_score(const PositionIndex& index, std::string_view character, Position p) {
  ScoreVector out;
  out.scores = Vector::Zero(index.sememe_count());
  if (const auto* b = index.bucket(character, p)) {
    const double norm = static_cast<double>(b->normalizer);
    for (const auto& [j, count] : b->counts) out.scores(j) = static_cast<double>(count) / norm;
  }
  return out;
}

SpwcfResult spwcf_score(const PositionIndex& index, std::string_view word) {
  if (word.empty()) throw Error(Errc::Unpredictable, "empty word");
  SpwcfResult result;
  result.score.word = std::string(word);
  result.score.scores = Vector::Zero(index.sememe_count());
  result.all_unseen = true;
  for (const auto& [c, p] : character_slots(word)) {
    const auto* b = index.bucket(c, p);
    if (!b) continue;
    result.all_unseen = false;
    const double norm = static_cast<double>(b->normalizer);
    for (const auto& [j, count] : b->counts) result.score.scores(j) += static_cast<double>(count) / norm;
  }
  return result;
}

void write_position_index(std::ostream& out, const PositionIndex& index) {
  for (const auto& [c, slots] : index.buckets()) {
    for (std::size_t p = 0; p < slots.size(); ++p) {
      const auto& b = slots[p];
      if (b.normalizer == 0) continue;
      out << c << '\t' << position_name(static_cast<Position>(p)) << '\t' << b.normalizer << '\t';
      bool first = true;
      for (const auto& [j, count] : b.counts) {
        if (!first) out << ',';
        out << j << ':' << count;
        first = false;
      }
      out << '\n';
    }
  }
}

PositionIndex read_position_index(std::istream& in, Index sememe_count, const std::string& source) {
  PositionIndex index(sememe_count);
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fail = [&](const std::string& why) {
      return Error(Errc::MalformedLine, source + ":" + std::to_string(line_no) + ": " + why);
    };
    const auto f = split_on(line, '\t');
    if (f.size() != 4) throw fail("expected 4 fields");
    Position p;
    if (f[1] == "B") {
      p = Position::Begin;
    } else if (f[1] == "M") {
      p = Position::Middle;
    } else if (f[1] == "E") {
      p = Position::End;
    } else {
      throw fail("bad position '" + std::string(f[1]) + "'");
    }
    long long normalizer;
    if (!parse_integer(f[2], normalizer) || normalizer < 1) throw fail("bad normalizer");
    PositionIndex::Bucket bucket;
    bucket.normalizer = normalizer;
    for (auto item : split_on(f[3], ',')) {
      const auto colon = item.find(':');
      long long j, count;
      if (colon == std::string_view::npos || !parse_integer(item.substr(0, colon), j) ||
          !parse_integer(item.substr(colon + 1), count) || j < 0 || j >= sememe_count || count < 1 ||
          count > normalizer) {
        throw fail("bad count entry '" + std::string(item) + "'");
      }
      bucket.counts[j] = count;
    }
    std::int64_t total = 0;
    for (const auto& [j, count] : bucket.counts) total += count;
    if (total != normalizer) throw fail("counts do not sum to the normalizer");
    if (index.bucket(f[0], p)) throw fail("duplicate slot");
    index.set_bucket(std::string(f[0]), p, std::move(bucket));
  }
  return index;
}

std::vector<PrototypeCandidate> prototype_candidates(std::string_view word, const CharEmbeddings& chars) {
  std::vector<PrototypeCandidate> out;
  const auto characters = split_characters(word);
  for (std::size_t k = 0; k < characters.size(); ++k) {
    const auto id = chars.find(characters[k]);
    if (!id) continue;
    for (const auto& proto : chars.prototypes(*id)) {
      out.push_back({static_cast<Index>(k), proto.label, proto.row, *id});
    }
  }
  return out;
}

namespace {

// Per-prototype norms, computed once per table.
Vector prototype_norms(const CharEmbeddings& chars) { return chars.matrix().rowwise().norm(); }

std::size_t select_with(const std::vector<PrototypeCandidate>& candidates, const CharEmbeddings& chars,
                        const Vector& proto_norms, const Eigen::Ref<const Vector>& sememe_vec, double sememe_norm) {
  if (sememe_norm == 0.0) return 0;
  std::size_t best = 0;
  double best_cos = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < candidates.size(); ++n) {
    const Index row = candidates[n].row;
    const double cos = chars.vector(row).dot(sememe_vec) / (proto_norms(row) * sememe_norm);
    if (cos > best_cos) {
      best_cos = cos;
      best = n;
    }
  }
  return best;
}

void check_model(const SpcseModel& model, const CharEmbeddings& chars) {
  if (model.dim() != chars.dim() || model.params.row_bias.size() != chars.character_count()) {
    throw Error(Errc::IndexMismatch, "SPCSE model does not match the character embeddings");
  }
}

}  // namespace

std::size_t select_candidate(const std::vector<PrototypeCandidate>& candidates, const CharEmbeddings& chars,
                             const Eigen::Ref<const Vector>& sememe_vec) {
  if (candidates.empty()) throw Error(Errc::NoInternalEvidence, "no character prototypes to select from");
  if (sememe_vec.size() != chars.dim()) {
    throw Error(Errc::DimensionMismatch, "sememe vector has length " + std::to_string(sememe_vec.size()) +
                                             ", character vectors have " + std::to_string(chars.dim()));
  }
  std::size_t best = 0;
  const double snorm = sememe_vec.norm();
  if (snorm == 0.0) return best;
  double best_cos = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < candidates.size(); ++n) {
    const Index row = candidates[n].row;
    const double cos = chars.vector(row).dot(sememe_vec) / (chars.vector(row).norm() * snorm);
    if (cos > best_cos) {
      best_cos = cos;
      best = n;
    }
  }
  return best;
}

PrototypeCandidate select_prototype(std::string_view word, const Eigen::Ref<const Vector>& sememe_vec,
                                    const CharEmbeddings& chars) {
  const auto candidates = prototype_candidates(word, chars);
  if (candidates.empty()) {
    throw Error(Errc::NoInternalEvidence, "no character of '" + std::string(word) + "' has an embedding");
  }
  return candidates[select_candidate(candidates, chars, sememe_vec)];
}

void SpcseHyper::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) throw Error(Errc::Config, "SPCSE lambda must be >= 0");
  if (!(zero_sample_prob >= 0.0 && zero_sample_prob <= 1.0)) {
    throw Error(Errc::Config, "SPCSE zero sampling probability must lie in [0, 1]");
  }
  if (epochs < 0) throw Error(Errc::Config, "SPCSE epochs must be >= 0");
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw Error(Errc::Config, "SPCSE learning rate must be positive");
}

SpcseData make_spcse_data(const AnnotationSet& train, const SememeCorrelation& corr, const CharEmbeddings& chars) {
  if (corr.sememe_count() != train.sememe_count()) {
    throw Error(Errc::IndexMismatch, "correlation matrix and annotations disagree on the sememe inventory");
  }
  SpcseData data;
  std::vector<Index> rows;
  for (Index i = 0; i < train.word_count(); ++i) {
    auto candidates = prototype_candidates(train.word(i), chars);
    if (candidates.empty()) continue;
    rows.push_back(i);
    data.candidates.push_back(std::move(candidates));
  }
  if (rows.empty()) throw Error(Errc::NoInternalEvidence, "no train word has a character with an embedding");
  data.rows = train.subset(rows);
  data.correlation = corr.dense();
  data.dropped = train.word_count() - data.rows.word_count();
  return data;
}

std::vector<std::vector<std::size_t>> spcse_selections(const SpcseModel& model, const SpcseData& data,
                                                       const CharEmbeddings& chars) {
  check_model(model, chars);
  const RowMatrix combined = model.params.combined();
  const Vector snorms = combined.rowwise().norm();
  const Vector pnorms = prototype_norms(chars);
  // All prototype-sememe dot products at once; selection only needs lookups.
  const Matrix dots = chars.matrix() * combined.transpose();
  std::vector<std::vector<std::size_t>> selections(data.candidates.size());
  for (std::size_t i = 0; i < data.candidates.size(); ++i) {
    const auto& cands = data.candidates[i];
    auto& sel = selections[i];
    sel.assign(static_cast<std::size_t>(combined.rows()), 0);
    for (Index j = 0; j < combined.rows(); ++j) {
      if (snorms(j) == 0.0) continue;
      double best_cos = -std::numeric_limits<double>::infinity();
      for (std::size_t n = 0; n < cands.size(); ++n) {
        const double cos = dots(cands[n].row, j) / (pnorms(cands[n].row) * snorms(j));
        if (cos > best_cos) {
          best_cos = cos;
          sel[static_cast<std::size_t>(j)] = n;
        }
      }
    }
  }
  return selections;
}

namespace {

template <typename Fn>
void for_each_cell_residual(const SpcseModel& model, const SpcseData& data, const CharEmbeddings& chars,
                            const std::vector<std::vector<std::size_t>>& selections, Fn&& fn) {
  const auto& p = model.params;
  const Matrix dots = chars.matrix() * p.combined().transpose();
  for (Index i = 0; i < data.rows.word_count(); ++i) {
    const auto& cands = data.candidates[static_cast<std::size_t>(i)];
    const auto& sel = selections[static_cast<std::size_t>(i)];
    const auto gold = data.rows.sememes_of(i);
    for (Index j = 0; j < dots.cols(); ++j) {
      const auto& c = cands[sel[static_cast<std::size_t>(j)]];
      const double target = std::binary_search(gold.begin(), gold.end(), j) ? 1.0 : 0.0;
      fn(j, c, dots(c.row, j) + p.row_bias(c.char_id) + p.sememe_bias(j) - target);
    }
  }
}

}  // namespace

double spcse_objective(const SpcseModel& model, const SpcseData& data, const CharEmbeddings& chars,
                       const std::vector<std::vector<std::size_t>>& selections, double lambda) {
  check_model(model, chars);
  double total = 0.0;
  for_each_cell_residual(model, data, chars, selections, [&](Index, const PrototypeCandidate&, double r) { total += r * r; });
  return total + detail::correlation_objective(model.params, data.correlation, lambda);
}

FactorParams spcse_gradient(const SpcseModel& model, const SpcseData& data, const CharEmbeddings& chars,
                            const std::vector<std::vector<std::size_t>>& selections, double lambda) {
  check_model(model, chars);
  FactorParams grad = zeros_like(model.params);
  for_each_cell_residual(model, data, chars, selections, [&](Index j, const PrototypeCandidate& c, double r) {
    const auto x = chars.vector(c.row).transpose();
    grad.sememe_vectors.row(j) += 2.0 * r * x;
    grad.context_vectors.row(j) += 2.0 * r * x;
    grad.row_bias(c.char_id) += 2.0 * r;
    grad.sememe_bias(j) += 2.0 * r;
  });
  detail::add_correlation_gradient(model.params, data.correlation, lambda, grad);
  return grad;
}

SpcseModel init_spcse(const CharEmbeddings& chars, std::vector<std::string> sememes, std::uint64_t seed) {
  Rng rng(seed);
  SpcseModel model;
  const auto m = static_cast<Index>(sememes.size());
  model.sememes = std::move(sememes);
  model.characters = chars.characters();
  model.params = init_factor_params(m, chars.character_count(), chars.dim(), rng);
  return model;
}

SpcseModel train_spcse(const AnnotationSet& train, const SememeCorrelation& corr, const CharEmbeddings& chars,
                       const SpcseHyper& hyper, const EpochObserver& observer) {
  hyper.validate();
  const SpcseData data = make_spcse_data(train, corr, chars);
  SpcseModel model = init_spcse(chars, train.sememes(), hyper.seed);
  Rng rng(hyper.seed ^ 0x9E3779B97F4A7C15ULL);
  const auto objective = [&] {
    return spcse_objective(model, data, chars, spcse_selections(model, data, chars), hyper.lambda);
  };
  if (observer) observer(0, objective());

  const Vector pnorms = prototype_norms(chars);
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

    Vector v(p.dim());
    for (const auto& t : tasks) {
      if (!t.annotation) {
        detail::correlation_step(p, t.cell, hyper.lambda, lr);
        continue;
      }
      const Index i = t.cell.row;
      const Index j = t.cell.col;
      // Selection follows the sememe's current direction at every visit.
      v = (p.sememe_vectors.row(j) + p.context_vectors.row(j)).transpose();
      const auto& cands = data.candidates[static_cast<std::size_t>(i)];
      const auto& c = cands[select_with(cands, chars, pnorms, v, v.norm())];
      const auto x = chars.vector(c.row).transpose();
      const double err = x.dot(v.transpose()) + p.row_bias(c.char_id) + p.sememe_bias(j) - t.cell.target;
      const double g = 2.0 * err * lr;
      p.sememe_vectors.row(j) -= g * x;
      p.context_vectors.row(j) -= g * x;
      p.row_bias(c.char_id) -= g;
      p.sememe_bias(j) -= g;
    }
    detail::require_finite(p, "SPCSE", epoch + 1);
    if (observer) {
      const double loss = objective();
      if (!std::isfinite(loss)) {
        throw Error(Errc::NonFiniteLoss, "SPCSE objective became non-finite in epoch " + std::to_string(epoch + 1));
      }
      observer(epoch + 1, loss);
    }
  }
  return model;
}

ScoreVector spcse_score(const SpcseModel& model, std::string_view word, const CharEmbeddings& chars) {
  check_model(model, chars);
  const auto candidates = prototype_candidates(word, chars);
  if (candidates.empty()) {
    throw Error(Errc::NoInternalEvidence, "no character of '" + std::string(word) + "' has an embedding");
  }
  const RowMatrix combined = model.params.combined();
  ScoreVector out;
  out.word = std::string(word);
  out.scores.resize(combined.rows());
  for (Index j = 0; j < combined.rows(); ++j) {
    const auto v = combined.row(j).transpose();
    const auto& c = candidates[select_candidate(candidates, chars, v)];
    out.scores(j) = chars.vector(c.row).dot(v);
  }
  return out;
}

void write_spcse(std::ostream& out, const SpcseModel& model) {
  write_factor_checkpoint(out, "spcse", model.sememes, model.characters, model.params);
}

SpcseModel read_spcse(std::istream& in, const std::string& source) {
  auto ck = read_factor_checkpoint(in, source);
  if (ck.kind != "spcse") throw Error(Errc::MalformedLine, source + ": not an SPCSE checkpoint");
  return SpcseModel{std::move(ck.sememes), std::move(ck.row_keys), std::move(ck.params)};
}

void save_spcse(const std::filesystem::path& path, const SpcseModel& model) {
  auto out = open_output(path);
  write_spcse(out, model);
}

SpcseModel load_spcse(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_spcse(in, path.string());
}

}  // namespace sememe
