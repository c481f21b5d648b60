#include "neural/error.hpp"

namespace neural {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyImage: return "EmptyImage";
    case ErrorCode::NonDivisibleDimensions: return "NonDivisibleDimensions";
    case ErrorCode::BadImage: return "BadImage";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::RowNotNormalized: return "RowNotNormalized";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidConcentration: return "InvalidConcentration";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::EmptyPrunedSet: return "EmptyPrunedSet";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::DanglingRelation: return "DanglingRelation";
    case ErrorCode::DuplicateEntityId: return "DuplicateEntityId";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::EmptyModality: return "EmptyModality";
    case ErrorCode::EdgeOutOfRange: return "EdgeOutOfRange";
    case ErrorCode::BridgeMissing: return "BridgeMissing";
    case ErrorCode::NonCanonical: return "NonCanonical";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::EmptyCandidate: return "EmptyCandidate";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

void fail(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace neural
