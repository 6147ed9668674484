#include "sememe/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sememe/error.hpp"

namespace sememe {

ScoreVector normalize_scores(const ScoreVector& v) {
  ScoreVector out;
  out.word = v.word;
  if (v.scores.size() == 0) {
    out.scores = v.scores;
    return out;
  }
  if (!v.scores.allFinite()) throw Error(Errc::NonFiniteLoss, "non-finite score for '" + v.word + "'");
  const double lo = v.scores.minCoeff();
  const double hi = v.scores.maxCoeff();
  if (hi == lo) {
    out.scores = Vector::Zero(v.scores.size());
    return out;
  }
  out.scores = (v.scores.array() - lo) / (hi - lo);
  return out;
}

ScoreVector ensemble(const ScoreVector& a, const ScoreVector& b, double ratio) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) throw Error(Errc::Config, "ensemble ratio must be positive");
  if (a.scores.size() != b.scores.size()) {
    throw Error(Errc::IndexMismatch, "ensembled score vectors differ in length");
  }
  if (!a.word.empty() && !b.word.empty() && a.word != b.word) {
    throw Error(Errc::IndexMismatch, "ensembled score vectors belong to different words");
  }
  const double wa = ratio / (1.0 + ratio);
  const double wb = 1.0 / (1.0 + ratio);
  ScoreVector out;
  out.word = a.word.empty() ? b.word : a.word;
  out.scores = wa * a.scores + wb * b.scores;
  return out;
}

RankedPrediction rank_scores(const ScoreVector& v) {
  RankedPrediction r;
  r.word = v.word;
  r.scores = v.scores;
  r.order.resize(static_cast<std::size_t>(v.scores.size()));
  std::iota(r.order.begin(), r.order.end(), Index{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&](Index a, Index b) { return v.scores(a) > v.scores(b); });
  return r;
}

void EnsembleWeights::validate() const {
  for (double r : {spwe_spse, csp_spwe_spse, spwcf_spcse, internal_external}) {
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::Config, "ensemble ratios must be positive");
  }
  if (!(csp_lambda >= 0.0) || !std::isfinite(csp_lambda)) {
    throw Error(Errc::Config, "CSP correlation weight must be >= 0");
  }
}

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::Spwe: return "SPWE";
    case Method::Spse: return "SPSE";
    case Method::SpweSpse: return "SPWE+SPSE";
    case Method::Spwcf: return "SPWCF";
    case Method::Spcse: return "SPCSE";
    case Method::SpwcfSpcse: return "SPWCF+SPCSE";
    case Method::Csp: return "CSP";
  }
  return "?";
}

const char* sources_name(Sources s) noexcept {
  switch (s) {
    case Sources::Internal: return "internal";
    case Sources::External: return "external";
    case Sources::Both: return "both";
  }
  return "?";
}

SememePredictor::SememePredictor(Models models)
    : models_(std::move(models)), spwe_model_(models_.train, models_.words, models_.spwe) {
  models_.weights.validate();
  const Index m = models_.train.sememe_count();
  const auto check = [m](Index got, const char* what) {
    if (got != m) {
      throw Error(Errc::IndexMismatch, std::string(what) + " covers " + std::to_string(got) + " sememes, expected " +
                                           std::to_string(m));
    }
  };
  check(static_cast<Index>(models_.spse.sememes.size()), "SPSE model");
  check(static_cast<Index>(models_.spse_csp.sememes.size()), "CSP SPSE model");
  check(static_cast<Index>(models_.spcse.sememes.size()), "SPCSE model");
  check(models_.position.sememe_count(), "position index");
}

Vector SememePredictor::word_vector(std::string_view word) const {
  const auto row = models_.words.find(word);
  if (!row) throw Error(Errc::NoEmbedding, "no embedding for '" + std::string(word) + "'");
  return models_.words.vector(*row);
}

ScoreVector SememePredictor::spwe(std::string_view word) const {
  ScoreVector s = spwe_model_.score(word_vector(word), word);
  s.word = std::string(word);
  return s;
}

ScoreVector SememePredictor::spse(std::string_view word, bool csp_variant) const {
  ScoreVector s = spse_score(csp_variant ? models_.spse_csp : models_.spse, word_vector(word));
  s.word = std::string(word);
  return s;
}

ScoreVector SememePredictor::spwcf(std::string_view word) const {
  auto result = spwcf_score(models_.position, word);
  if (result.all_unseen) {
    throw Error(Errc::NoInternalEvidence, "no character of '" + std::string(word) + "' was seen in training");
  }
  return std::move(result.score);
}

ScoreVector SememePredictor::spcse(std::string_view word) const {
  return spcse_score(models_.spcse, word, models_.chars);
}

ScoreVector SememePredictor::external(std::string_view word, bool csp_variant) const {
  const double ratio = csp_variant ? models_.weights.csp_spwe_spse : models_.weights.spwe_spse;
  return ensemble(normalize_scores(spwe(word)), normalize_scores(spse(word, csp_variant)), ratio);
}

ScoreVector SememePredictor::internal(std::string_view word) const {
  std::optional<ScoreVector> filtering;
  std::optional<ScoreVector> factorization;
  try {
    filtering = normalize_scores(spwcf(word));
  } catch (const Error& e) {
    if (e.code() != Errc::NoInternalEvidence) throw;
  }
  try {
    factorization = normalize_scores(spcse(word));
  } catch (const Error& e) {
    if (e.code() != Errc::NoInternalEvidence) throw;
  }
  if (filtering && factorization) return ensemble(*filtering, *factorization, models_.weights.spwcf_spcse);
  if (filtering) return *filtering;
  if (factorization) return *factorization;
  throw Error(Errc::NoInternalEvidence, "no internal evidence for '" + std::string(word) + "'");
}

CspPrediction SememePredictor::csp(std::string_view word) const {
  std::optional<ScoreVector> inner;
  std::optional<ScoreVector> outer;
  try {
    inner = internal(word);
  } catch (const Error& e) {
    if (e.code() != Errc::NoInternalEvidence) throw;
  }
  if (models_.words.find(word)) {
    try {
      outer = external(word, true);
    } catch (const Error& e) {
      if (e.code() != Errc::NoNeighbors) throw;
    }
  }

  CspPrediction out;
  if (inner && outer) {
    out.scores = ensemble(*inner, *outer, models_.weights.internal_external);
    out.sources = Sources::Both;
  } else if (inner) {
    out.scores = std::move(*inner);
    out.sources = Sources::Internal;
    out.fallback = true;
  } else if (outer) {
    out.scores = std::move(*outer);
    out.sources = Sources::External;
    out.fallback = true;
  } else {
    throw Error(Errc::Unpredictable,
                "'" + std::string(word) + "' has neither an embedding nor characters with evidence");
  }
  out.scores.word = std::string(word);
  out.ranking = rank_scores(out.scores);
  return out;
}

ScoreVector SememePredictor::predict(Method method, std::string_view word) const {
  switch (method) {
    case Method::Spwe: return spwe(word);
    case Method::Spse: return spse(word);
    case Method::SpweSpse: return external(word);
    case Method::Spwcf: return spwcf(word);
    case Method::Spcse: return spcse(word);
    case Method::SpwcfSpcse: return internal(word);
    case Method::Csp: return csp(word).scores;
  }
  throw Error(Errc::Config, "unknown method");
}

}  // namespace sememe
