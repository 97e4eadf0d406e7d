#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace doclens {

enum class ErrorCode {
  // corpus
  MissingFile,
  SchemaViolation,
  DuplicateDocId,
  NoSectionMatched,
  EmptyVocabulary,
  // topics
  EmptyCorpus,
  DegenerateK,
  NegativeInput,
  AllZeroRow,
  LabelCountMismatch,
  InvalidConfig,
  // analysis
  DimensionMismatch,
  NotADistribution,
  BadK,
  TooFewPoints,
  TooFewGroups,
  GroupTooSmall,
  InsufficientPairs,
  PerplexityTooLarge,
  // summarize
  BadN,
  ProviderUnavailable,
  InputTooLarge,
  LlmUnavailable,
  // service
  DanglingReference,
  VersionMismatch,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message names the offending field, path, index or parameter.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace doclens
