#include "domino/wave_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "domino/error.hpp"
#include "domino/quadrature.hpp"

namespace domino {

namespace {

constexpr double kQuadratureTolerance = 1e-10;  // seconds
constexpr int kQuadratureDepth = 40;

void require_propagating(const ArraySpec& spec) {
  if (spacing_regime(spec) != SpacingRegime::Propagating) {
    throw Error(ErrorCode::NonPropagating,
                "d/H = " + std::to_string(spec.spacing_ratio()) +
                    " exceeds the practical propagation limit sqrt(3)/2 = 0.866: the striker "
                    "hits its neighbour below the mid point");
  }
}

void require_falling(double omega0) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    throw Error(ErrorCode::NonFalling,
                "initial angular speed must be positive: a domino at rest upright never falls");
  }
}

bool usable(const MeasurementPoint& p) {
  return p.reliable && p.d_over_h > 0.0 && p.d_over_h <= kPracticalSpacingLimit;
}

}  // namespace

CollisionParams::CollisionParams(double restitution) : restitution_(restitution) {
  if (!(restitution >= 0.0 && restitution <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "restitution must lie in [0, 1]");
  }
}

const char* to_string(SpeedStatus status) noexcept {
  switch (status) {
    case SpeedStatus::Converged: return "Converged";
    case SpeedStatus::Divergent: return "Divergent";
    case SpeedStatus::NonPropagating: return "NonPropagating";
  }
  return "Unknown";
}

std::vector<double> ImpactSeries::periods() const {
  std::vector<double> out;
  if (impact_times.size() < 2) return out;
  out.reserve(impact_times.size() - 1);
  for (std::size_t i = 1; i < impact_times.size(); ++i) {
    out.push_back(impact_times[i] - impact_times[i - 1]);
  }
  return out;
}

double energy_gain(const ArraySpec& spec) noexcept {
  // 1 - cos(asin r) written to avoid cancellation at small r.
  const double r = spec.spacing_ratio();
  const double one_minus_cos = r * r / (1.0 + std::sqrt((1.0 - r) * (1.0 + r)));
  return 3.0 * kGravity / spec.height() * one_minus_cos;
}

double angular_speed_at(const ArraySpec& spec, double omega0, double theta) {
  const double half = std::sin(0.5 * theta);
  return std::sqrt(omega0 * omega0 + 3.0 * kGravity / spec.height() * 2.0 * half * half);
}

double fall_time(const ArraySpec& spec, double omega0) {
  require_falling(omega0);
  require_propagating(spec);
  const double gain_rate = 6.0 * kGravity / spec.height();
  const double w0sq = omega0 * omega0;
  auto integrand = [&](double theta) {
    const double half = std::sin(0.5 * theta);
    return 1.0 / std::sqrt(w0sq + gain_rate * half * half);
  };
  return adaptive_simpson(integrand, 0.0, spec.contact_angle(), kQuadratureTolerance, kQuadratureDepth);
}

double collision_map(const ArraySpec& spec, const CollisionParams& params, double omega0) {
  require_falling(omega0);
  return params.transfer() * std::sqrt(omega0 * omega0 + energy_gain(spec));
}

double limiting_omega(const ArraySpec& spec, const CollisionParams& params) {
  require_propagating(spec);
  const double alpha = params.transfer();
  if (alpha >= 1.0) {
    throw Error(ErrorCode::Divergent,
                "restitution e = 1 has no finite fixed point: every collision speeds the wave up");
  }
  return alpha * std::sqrt(energy_gain(spec) / ((1.0 - alpha) * (1.0 + alpha)));
}

SpeedPrediction evaluate_speed(const ArraySpec& spec, const CollisionParams& params) {
  SpeedPrediction out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (spacing_regime(spec) != SpacingRegime::Propagating) {
    out = {nan, nan, nan, nan, SpeedStatus::NonPropagating};
    return out;
  }
  if (params.transfer() >= 1.0) {
    out = {nan, nan, nan, nan, SpeedStatus::Divergent};
    return out;
  }
  out.fixed_point_omega = limiting_omega(spec, params);
  out.collision_period = fall_time(spec, out.fixed_point_omega);
  out.wave_speed = spec.pitch() / out.collision_period;
  out.normalized_speed = normalize_speed(out.wave_speed, spec.height());
  out.status = SpeedStatus::Converged;
  return out;
}

SpeedPrediction limiting_speed(const ArraySpec& spec, const CollisionParams& params) {
  require_propagating(spec);
  limiting_omega(spec, params);  // throws Divergent
  return evaluate_speed(spec, params);
}

std::vector<CurvePoint> speed_curve(double t_over_h, const CollisionParams& params,
                                    std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "speed curve grid is empty");
  std::vector<CurvePoint> rows;
  rows.reserve(grid.size());
  for (double ratio : grid) {
    CurvePoint row{ratio, SpeedStatus::NonPropagating, std::numeric_limits<double>::quiet_NaN()};
    if (ratio > 0.0 && ratio < 1.0) {
      const auto p = evaluate_speed(make_ratio_array(ratio, t_over_h), params);
      row.status = p.status;
      row.normalized_speed = p.normalized_speed;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::InvalidParameter, "grid needs lo <= hi and a positive step");
  }
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

ImpactSeries simulate_chain(const ArraySpec& spec, const CollisionParams& params, double omega_init) {
  require_falling(omega_init);
  require_propagating(spec);

  ImpactSeries series;
  const std::size_t impacts = spec.count() - 1;
  series.impact_times.reserve(impacts);
  series.pre_impact_omegas.reserve(impacts);
  series.post_impact_omegas.reserve(impacts);
  series.divergent = params.transfer() >= 1.0;

  const double gain = energy_gain(spec);
  double clock = 0.0;
  double omega = omega_init;
  for (std::size_t k = 0; k < impacts; ++k) {
    clock += fall_time(spec, omega);
    const double at_contact = std::sqrt(omega * omega + gain);
    omega = params.transfer() * at_contact;
    series.impact_times.push_back(clock);
    series.pre_impact_omegas.push_back(at_contact);
    series.post_impact_omegas.push_back(omega);
  }
  return series;
}

double model_rms(std::span<const MeasurementPoint> points, double t_over_h, const CollisionParams& params) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : points) {
    if (!usable(p)) continue;
    const auto pred = limiting_speed(make_ratio_array(p.d_over_h, t_over_h), params);
    const double r = pred.normalized_speed - p.v_norm;
    sum += r * r;
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::InsufficientData, "no reliable points in the model domain");
  return std::sqrt(sum / static_cast<double>(n));
}

CalibrationResult calibrate_restitution(const Dataset& dataset, double t_over_h) {
  std::vector<MeasurementPoint> points;
  std::copy_if(dataset.points.begin(), dataset.points.end(), std::back_inserter(points), usable);
  if (points.size() < 2) {
    throw Error(ErrorCode::InsufficientData,
                "calibration needs at least two reliable points with d/H in (0, sqrt(3)/2]");
  }
  auto cost = [&](double e) { return model_rms(points, t_over_h, CollisionParams(e)); };

  constexpr double kUpper = 0.999;
  constexpr int kSteps = 999;  // 0.001 spacing on [0, 0.999]
  double best_e = 0.0;
  double best_cost = cost(0.0);
  for (int i = 1; i <= kSteps; ++i) {
    const double e = static_cast<double>(i) * 0.001;
    const double c = cost(e);
    if (c < best_cost) {
      best_cost = c;
      best_e = e;
    }
  }

  // Golden-section refinement inside the neighbouring grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(0.0, best_e - 0.001);
  double b = std::min(kUpper, best_e + 0.001);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = cost(c);
  double fd = cost(d);
  while (b - a > 1e-4) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = cost(d);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_cost = cost(refined);
  if (refined_cost < best_cost) {
    best_e = refined;
    best_cost = refined_cost;
  }
  return {best_e, best_cost, points.size()};
}

}  // namespace domino
