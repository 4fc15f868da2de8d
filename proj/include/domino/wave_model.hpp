#pragma once

#include <span>
#include <string>
#include <vector>

#include "domino/dataset.hpp"
#include "domino/geometry.hpp"

namespace domino {

// Pairwise toppling model. Each domino is a thin plate pivoting on its base
// edge (I = m H^2 / 3). Falling from vertical with initial angular speed w0,
// energy conservation gives w(theta)^2 = w0^2 + (3g/H)(1 - cos theta). At
// first contact the striker hands the struck domino (1+e)/2 of its angular
// speed, after which the striker plays no further part.

inline constexpr double kDefaultRestitution = 0.7;
inline constexpr double kDefaultThicknessRatio = 0.15;

class CollisionParams {
 public:
  /// Throws Error{InvalidParameter} unless 0 <= e <= 1.
  explicit CollisionParams(double restitution = kDefaultRestitution);

  double restitution() const noexcept { return restitution_; }
  /// Fraction of the striker's angular speed passed on, (1+e)/2.
  double transfer() const noexcept { return 0.5 * (1.0 + restitution_); }

 private:
  double restitution_;
};

enum class SpeedStatus { Converged, Divergent, NonPropagating };

const char* to_string(SpeedStatus status) noexcept;

struct SpeedPrediction {
  double collision_period = 0.0;   // [s]
  double wave_speed = 0.0;         // [m/s]
  double normalized_speed = 0.0;   // v / sqrt(gH)
  double fixed_point_omega = 0.0;  // post-impact angular speed at the limit [rad/s]
  SpeedStatus status = SpeedStatus::Converged;
};

struct ImpactSeries {
  std::vector<double> impact_times;
  std::vector<double> pre_impact_omegas;   // striker at contact
  std::vector<double> post_impact_omegas;  // struck domino just after contact
  bool divergent = false;

  std::size_t size() const noexcept { return impact_times.size(); }
  /// Differences between successive impact times (size() - 1 entries).
  std::vector<double> periods() const;
};

/// (3g/H)(1 - cos theta_c): gain in w^2 between vertical and contact.
double energy_gain(const ArraySpec& spec) noexcept;

/// Angular speed after tilting by theta from vertical, starting at omega0.
double angular_speed_at(const ArraySpec& spec, double omega0, double theta);

/// Time to tilt from vertical to contact. Throws NonFalling for omega0 <= 0,
/// NonPropagating beyond the practical spacing limit.
double fall_time(const ArraySpec& spec, double omega0);

/// Struck domino's initial angular speed given the striker's initial one.
double collision_map(const ArraySpec& spec, const CollisionParams& params, double omega0);

/// Positive fixed point of collision_map. Throws Divergent for e = 1.
double limiting_omega(const ArraySpec& spec, const CollisionParams& params);

/// Non-throwing evaluation; status reports Divergent / NonPropagating.
SpeedPrediction evaluate_speed(const ArraySpec& spec, const CollisionParams& params);

/// Steady wave speed at the collision fixed point. Throws Divergent or
/// NonPropagating.
SpeedPrediction limiting_speed(const ArraySpec& spec, const CollisionParams& params);

struct CurvePoint {
  double d_over_h = 0.0;
  SpeedStatus status = SpeedStatus::Converged;
  double normalized_speed = 0.0;  // NaN unless status == Converged
};

/// Normalized limiting speed over a grid of d/H at unit height. Per-point
/// failures are recorded in the row. Throws EmptyGrid.
std::vector<CurvePoint> speed_curve(double t_over_h, const CollisionParams& params,
                                    std::span<const double> grid);

/// Grid lo, lo+step, ... up to hi (inclusive within half a step).
std::vector<double> make_grid(double lo, double hi, double step);

/// Sequential chain of count()-1 collisions starting with domino 0 at
/// omega_init. For e = 1 the series is still produced with divergent = true.
ImpactSeries simulate_chain(const ArraySpec& spec, const CollisionParams& params, double omega_init);

struct CalibrationResult {
  double restitution = 0.0;
  double rms = 0.0;
  std::size_t points_used = 0;
};

/// RMS of model minus measured normalized speed over reliable in-domain points.
double model_rms(std::span<const MeasurementPoint> points, double t_over_h, const CollisionParams& params);

/// Best-fit restitution on [0, 0.999]: 0.001 grid then golden-section to 1e-4.
/// Throws InsufficientData for fewer than two usable points.
CalibrationResult calibrate_restitution(const Dataset& dataset, double t_over_h);

}  // namespace domino
