#include "domino/geometry.hpp"

#include <cmath>
#include <string>

#include "domino/error.hpp"

namespace domino {

void DominoGeometry::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidGeometry, what); };
  if (!(height > 0.0) || !std::isfinite(height)) fail("domino height must be positive");
  if (!(thickness >= 0.0) || !std::isfinite(thickness)) fail("domino thickness must be non-negative");
  if (!(width > 0.0) || !std::isfinite(width)) fail("domino width must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) fail("domino mass must be positive");
  if (!(thickness < height)) fail("domino thickness must be smaller than its height");
}

const char* to_string(SpacingRegime regime) noexcept {
  switch (regime) {
    case SpacingRegime::Propagating: return "Propagating";
    case SpacingRegime::BeyondPracticalLimit: return "BeyondPracticalLimit";
    case SpacingRegime::Overlapping: return "Overlapping";
  }
  return "Unknown";
}

ArraySpec make_array_spec(const DominoGeometry& geometry, double gap, std::size_t count) {
  geometry.validate();
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    throw Error(ErrorCode::InvalidGap, "gap between dominoes must be positive");
  }
  if (count < 2) {
    throw Error(ErrorCode::InvalidParameter, "an array needs at least two dominoes");
  }
  const double ratio = gap / geometry.height;
  if (ratio >= 1.0) {
    throw Error(ErrorCode::OverlappingSpacing,
                "gap d/H = " + std::to_string(ratio) + " >= 1: a falling domino never reaches its neighbour");
  }

  ArraySpec spec;
  spec.geometry_ = geometry;
  spec.gap_ = gap;
  spec.count_ = count;
  spec.pitch_ = gap + geometry.thickness;
  spec.spacing_ratio_ = ratio;
  spec.contact_angle_ = std::asin(ratio);
  spec.contact_height_ = std::sqrt((geometry.height - gap) * (geometry.height + gap));
  return spec;
}

ArraySpec make_ratio_array(double d_over_h, double t_over_h, double height, std::size_t count) {
  const DominoGeometry geometry{height, t_over_h * height, 0.5 * height, 1.0};
  return make_array_spec(geometry, d_over_h * height, count);
}

SpacingRegime spacing_regime(double spacing_ratio) noexcept {
  if (spacing_ratio >= 1.0) return SpacingRegime::Overlapping;
  if (spacing_ratio > kPracticalSpacingLimit) return SpacingRegime::BeyondPracticalLimit;
  return SpacingRegime::Propagating;
}

SpacingRegime spacing_regime(const ArraySpec& spec) noexcept {
  return spacing_regime(spec.spacing_ratio());
}

double normalize_speed(double speed, double height) {
  if (!(height > 0.0)) throw Error(ErrorCode::NonPositiveHeight, "height must be positive");
  return speed / std::sqrt(kGravity * height);
}

double denormalize_speed(double normalized, double height) {
  if (!(height > 0.0)) throw Error(ErrorCode::NonPositiveHeight, "height must be positive");
  return normalized * std::sqrt(kGravity * height);
}

}  // namespace domino
