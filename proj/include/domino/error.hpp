#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace domino {

enum class ErrorCode {
  InvalidGeometry,
  InvalidGap,
  OverlappingSpacing,
  NonPositiveHeight,
  NonFalling,
  NonPropagating,
  Divergent,
  InvalidParameter,
  EmptyGrid,
  InsufficientData,
  MalformedContainer,
  UnsupportedEncoding,
  RateTooLow,
  InvalidSignal,
  EmptyImpactList,
  TooShort,
  BandOutOfRange,
  UnknownDataset,
  ParseError,
  DuplicateSpacing,
  EmptyOverlap,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace domino
