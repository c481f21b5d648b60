#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace neural {

/// Typed failure categories shared by every module. The CLI maps any of
/// these to exit code 2 ("data error").
enum class ErrorCode {
  InvalidArgument,
  EmptyImage,
  NonDivisibleDimensions,
  BadImage,
  BadMagic,
  UnsupportedVersion,
  Truncated,
  TrailingBytes,
  NegativeWeight,
  RowNotNormalized,
  NonFiniteValue,
  InvalidConcentration,
  InvalidFraction,
  EmptyPrunedSet,
  MalformedDocument,
  DanglingRelation,
  DuplicateEntityId,
  EmptyGraph,
  EmptyModality,
  EdgeOutOfRange,
  BridgeMissing,
  NonCanonical,
  DimensionMismatch,
  EmptyDataset,
  DegenerateLabels,
  EmptyCandidate,
  InvalidRate,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace neural
