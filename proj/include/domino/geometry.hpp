#pragma once

#include <cstddef>

namespace domino {

/// Standard gravity [m/s^2].
inline constexpr double kGravity = 9.80665;

/// Spacing ratio d/H above which a striker hits its neighbour below the
/// neighbour's mid point (sqrt(3)/2).
inline constexpr double kPracticalSpacingLimit = 0.86602540378443864676;

/// Physical dimensions of a single domino, SI units.
struct DominoGeometry {
  double height = 0.0;     // H [m]
  double thickness = 0.0;  // t [m]
  double width = 0.0;      // w [m]
  double mass = 0.0;       // m [kg]

  /// Throws Error{InvalidGeometry} unless H > 0, 0 <= t < H, w > 0, m > 0.
  void validate() const;
};

/// A uniformly spaced row of identical dominoes with derived contact geometry.
///
/// Contact geometry uses the thin-domino idealisation: the striker's top edge
/// meets the neighbour's face at tilt theta_c = asin(d/H), so thickness only
/// enters through the pitch L = d + t.
class ArraySpec {
 public:
  const DominoGeometry& geometry() const noexcept { return geometry_; }
  double height() const noexcept { return geometry_.height; }
  double thickness() const noexcept { return geometry_.thickness; }
  double gap() const noexcept { return gap_; }
  std::size_t count() const noexcept { return count_; }

  double pitch() const noexcept { return pitch_; }
  double spacing_ratio() const noexcept { return spacing_ratio_; }
  /// Striker tilt from vertical at first contact [rad].
  double contact_angle() const noexcept { return contact_angle_; }
  /// Height of the contact point on the struck domino, sqrt(H^2 - d^2).
  double contact_height() const noexcept { return contact_height_; }

 private:
  friend ArraySpec make_array_spec(const DominoGeometry&, double, std::size_t);
  ArraySpec() = default;

  DominoGeometry geometry_{};
  double gap_ = 0.0;
  std::size_t count_ = 0;
  double pitch_ = 0.0;
  double spacing_ratio_ = 0.0;
  double contact_angle_ = 0.0;
  double contact_height_ = 0.0;
};

enum class SpacingRegime { Propagating, BeyondPracticalLimit, Overlapping };

const char* to_string(SpacingRegime regime) noexcept;

/// Builds a validated array. Throws InvalidGeometry, InvalidGap,
/// OverlappingSpacing (d/H >= 1) or InvalidParameter (count < 2).
ArraySpec make_array_spec(const DominoGeometry& geometry, double gap, std::size_t count);

/// Convenience constructor from dimensionless ratios at an absolute height.
/// Width and mass do not enter the dynamics; they are set to nominal values.
ArraySpec make_ratio_array(double d_over_h, double t_over_h, double height = 1.0,
                           std::size_t count = 2);

/// Regime for a spacing ratio; sqrt(3)/2 itself still propagates.
SpacingRegime spacing_regime(double spacing_ratio) noexcept;
SpacingRegime spacing_regime(const ArraySpec& spec) noexcept;

/// v / sqrt(g H). Throws NonPositiveHeight for H <= 0.
double normalize_speed(double speed, double height);
double denormalize_speed(double normalized, double height);

}  // namespace domino
