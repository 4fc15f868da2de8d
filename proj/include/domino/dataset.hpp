#pragma once

#include <string>
#include <vector>

namespace domino {

enum class Orientation { Vertical, Horizontal, External };

const char* to_string(Orientation orientation) noexcept;

/// One measured (d/H, v/sqrt(gH)) pair.
struct MeasurementPoint {
  double d_over_h = 0.0;
  double v_norm = 0.0;
  Orientation orientation = Orientation::External;
  bool reliable = true;
  std::string source;
};

/// Named collection of measurements; d/H values are unique.
struct Dataset {
  std::string name;
  std::vector<MeasurementPoint> points;

  /// Throws Error{InvalidParameter} for an empty set or non-positive values,
  /// Error{DuplicateSpacing} for repeated d/H.
  void validate() const;
};

}  // namespace domino
