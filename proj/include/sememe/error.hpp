#ifndef SEMEME_ERROR_HPP
#define SEMEME_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sememe {

enum class Errc {
  EmptyDataset,
  MalformedLine,
  InsufficientWords,
  DimensionMismatch,
  DuplicateWord,
  ZeroVector,
  PrototypeOutOfRange,
  NoNeighbors,
  NoEmbedding,
  NonFiniteLoss,
  NoInternalEvidence,
  Unpredictable,
  IndexMismatch,
  EvaluationSkip,
  EvaluationEmpty,
  Io,
  Config,
};

// Broad failure class, used for process exit codes.
enum class ErrorCategory { Config, Data, Numeric };

const char* errc_name(Errc code) noexcept;
ErrorCategory errc_category(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return errc_category(code_); }

private:
  Errc code_;
};

}  // namespace sememe

#endif  // SEMEME_ERROR_HPP
