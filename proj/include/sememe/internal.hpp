#ifndef SEMEME_INTERNAL_HPP
#define SEMEME_INTERNAL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sememe/embeddings.hpp"
#include "sememe/factorization.hpp"
#include "sememe/kb.hpp"
#include "sememe/score.hpp"

namespace sememe {

enum class Position { Begin = 0, Middle = 1, End = 2 };

const char* position_name(Position p) noexcept;

/// The (character, position) slots a word occupies. First character is
/// Begin, last is End, the rest Middle; a one-character word is both Begin
/// and End. Each slot appears once even if a character repeats.
std::vector<std::pair<std::string, Position>> character_slots(std::string_view word);

// ---------------------------------------------------------------------------
// Word-to-character filtering

/// Per (character, position): summed annotation counts of the train words
/// occupying that slot, and the summed sizes of their sememe sets.
class PositionIndex {
public:
  struct Bucket {
    std::map<Index, std::int64_t> counts;  // sememe -> number of words
    std::int64_t normalizer = 0;           // sum of |S_w| over those words

    friend bool operator==(const Bucket&, const Bucket&) = default;
  };

  PositionIndex() = default;
  explicit PositionIndex(Index sememe_count) : sememe_count_(sememe_count) {}

  Index sememe_count() const { return sememe_count_; }
  /// nullptr when the slot was never seen.
  const Bucket* bucket(std::string_view character, Position p) const;
  void add(const std::string& character, Position p, std::span<const Index> sememes);
  void set_bucket(const std::string& character, Position p, Bucket bucket);

  const std::map<std::string, std::array<Bucket, 3>, std::less<>>& buckets() const { return buckets_; }

  friend bool operator==(const PositionIndex&, const PositionIndex&) = default;

private:
  Index sememe_count_ = 0;
  std::map<std::string, std::array<Bucket, 3>, std::less<>> buckets_;
};

PositionIndex build_position_index(const AnnotationSet& train);

/// P_p(s_j | c) for every sememe; all zeros for an unseen slot.
ScoreVector spwcf_char_score(const PositionIndex& index, std::string_view character, Position p);

struct SpwcfResult {
  ScoreVector score;
  bool all_unseen = false;  // no slot of the word had evidence
};

/// Sum of spwcf_char_score over the slots of `word`.
SpwcfResult spwcf_score(const PositionIndex& index, std::string_view word);

/// Text form: `char<TAB>position<TAB>normalizer<TAB>j:count,...` per slot.
void write_position_index(std::ostream& out, const PositionIndex& index);
PositionIndex read_position_index(std::istream& in, Index sememe_count, const std::string& source = "<stream>");

// ---------------------------------------------------------------------------
// Character prototype selection and character-sememe factorization

/// One usable (character, prototype) pair of a word.
struct PrototypeCandidate {
  Index position;  // 0-based character position in the word
  int label;       // 1-based prototype index
  Index row;       // row in CharEmbeddings::matrix()
  Index char_id;   // CharEmbeddings character id
};

/// Candidates in (position, label) order; characters without vectors are skipped.
std::vector<PrototypeCandidate> prototype_candidates(std::string_view word, const CharEmbeddings& chars);

/// Index into `candidates` of the prototype closest in cosine to
/// `sememe_vec`; ties go to the earliest candidate. A zero `sememe_vec`
/// selects the first candidate.
std::size_t select_candidate(const std::vector<PrototypeCandidate>& candidates, const CharEmbeddings& chars,
                             const Eigen::Ref<const Vector>& sememe_vec);

/// Throws NoInternalEvidence if no character of `word` has a vector.
PrototypeCandidate select_prototype(std::string_view word, const Eigen::Ref<const Vector>& sememe_vec,
                                    const CharEmbeddings& chars);

struct SpcseHyper {
  double lambda = 0.1;
  double zero_sample_prob = 0.025;
  int epochs = 20;
  double lr0 = 0.01;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SpcseModel {
  std::vector<std::string> sememes;
  std::vector<std::string> characters;  // one bias per character type
  FactorParams params;

  Index dim() const { return params.dim(); }
  friend bool operator==(const SpcseModel&, const SpcseModel&) = default;
};

/// Train words with at least one usable character, with their candidates.
struct SpcseData {
  AnnotationSet rows;
  std::vector<std::vector<PrototypeCandidate>> candidates;  // per row word
  Matrix correlation;
  Index dropped = 0;
};

SpcseData make_spcse_data(const AnnotationSet& train, const SememeCorrelation& corr, const CharEmbeddings& chars);

/// Selected candidate index per (word, sememe) cell under the current model.
std::vector<std::vector<std::size_t>> spcse_selections(const SpcseModel& model, const SpcseData& data,
                                                       const CharEmbeddings& chars);

/// Full objective with the given selection held fixed.
double spcse_objective(const SpcseModel& model, const SpcseData& data, const CharEmbeddings& chars,
                       const std::vector<std::vector<std::size_t>>& selections, double lambda);
FactorParams spcse_gradient(const SpcseModel& model, const SpcseData& data, const CharEmbeddings& chars,
                            const std::vector<std::vector<std::size_t>>& selections, double lambda);

SpcseModel init_spcse(const CharEmbeddings& chars, std::vector<std::string> sememes, std::uint64_t seed);

SpcseModel train_spcse(const AnnotationSet& train, const SememeCorrelation& corr, const CharEmbeddings& chars,
                       const SpcseHyper& hyper, const EpochObserver& observer = {});

/// score(s_j) = c . (s'_j + sbar'_j) with c the selected prototype for s_j.
ScoreVector spcse_score(const SpcseModel& model, std::string_view word, const CharEmbeddings& chars);

void write_spcse(std::ostream& out, const SpcseModel& model);
SpcseModel read_spcse(std::istream& in, const std::string& source = "<stream>");
void save_spcse(const std::filesystem::path& path, const SpcseModel& model);
SpcseModel load_spcse(const std::filesystem::path& path);

}  // namespace sememe

#endif  // SEMEME_INTERNAL_HPP
