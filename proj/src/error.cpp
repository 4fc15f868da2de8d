#include "domino/error.hpp"

namespace domino {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::InvalidGap: return "InvalidGap";
    case ErrorCode::OverlappingSpacing: return "OverlappingSpacing";
    case ErrorCode::NonPositiveHeight: return "NonPositiveHeight";
    case ErrorCode::NonFalling: return "NonFalling";
    case ErrorCode::NonPropagating: return "NonPropagating";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::MalformedContainer: return "MalformedContainer";
    case ErrorCode::UnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::RateTooLow: return "RateTooLow";
    case ErrorCode::InvalidSignal: return "InvalidSignal";
    case ErrorCode::EmptyImpactList: return "EmptyImpactList";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::BandOutOfRange: return "BandOutOfRange";
    case ErrorCode::UnknownDataset: return "UnknownDataset";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateSpacing: return "DuplicateSpacing";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace domino
