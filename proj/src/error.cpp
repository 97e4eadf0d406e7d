#include "doclens/error.hpp"

namespace doclens {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DuplicateDocId: return "DuplicateDocId";
    case ErrorCode::NoSectionMatched: return "NoSectionMatched";
    case ErrorCode::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DegenerateK: return "DegenerateK";
    case ErrorCode::NegativeInput: return "NegativeInput";
    case ErrorCode::AllZeroRow: return "AllZeroRow";
    case ErrorCode::LabelCountMismatch: return "LabelCountMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::InsufficientPairs: return "InsufficientPairs";
    case ErrorCode::PerplexityTooLarge: return "PerplexityTooLarge";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::InputTooLarge: return "InputTooLarge";
    case ErrorCode::LlmUnavailable: return "LlmUnavailable";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace doclens
