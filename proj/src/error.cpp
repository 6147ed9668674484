#include "sememe/error.hpp"

namespace sememe {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::InsufficientWords: return "InsufficientWords";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DuplicateWord: return "DuplicateWord";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::PrototypeOutOfRange: return "PrototypeOutOfRange";
    case Errc::NoNeighbors: return "NoNeighbors";
    case Errc::NoEmbedding: return "NoEmbedding";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::NoInternalEvidence: return "NoInternalEvidence";
    case Errc::Unpredictable: return "Unpredictable";
    case Errc::IndexMismatch: return "IndexMismatch";
    case Errc::EvaluationSkip: return "EvaluationSkip";
    case Errc::EvaluationEmpty: return "EvaluationEmpty";
    case Errc::Io: return "Io";
    case Errc::Config: return "Config";
  }
  return "Unknown";
}

ErrorCategory errc_category(Errc code) noexcept {
  switch (code) {
    case Errc::Config: return ErrorCategory::Config;
    case Errc::NonFiniteLoss:
    case Errc::ZeroVector: return ErrorCategory::Numeric;
    default: return ErrorCategory::Data;
  }
}

}  // namespace sememe
