#pragma once

#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "domino/dataset.hpp"
#include "domino/wave_model.hpp"

namespace domino {

/// How the "less reliable" entries of the embedded tables are assigned.
enum class ReliabilityReading {
  ExtremesPerTable,  // closest and widest spacing of each table
  GlobalExtremes,    // two closest and two widest spacings overall
};

/// "larham_vertical" or "larham_horizontal". Throws UnknownDataset.
Dataset builtin_dataset(std::string_view name, ReliabilityReading reading = ReliabilityReading::ExtremesPerTable);

std::vector<std::string> builtin_dataset_names();

/// CSV with header d_over_H,v_norm,reliable,source (reliable is 0 or 1).
/// Throws ParseError naming the line, DuplicateSpacing.
Dataset load_dataset_csv(std::istream& in, std::string name = "csv");
Dataset load_dataset_file(const std::string& path);

struct Residual {
  double d_over_h = 0.0;
  double measured = 0.0;
  double model = 0.0;
  double residual = 0.0;  // model - measured
};

struct ValidationReport {
  std::string model_label;
  std::string dataset_name;
  std::vector<Residual> residuals;  // sorted by d/H
  double rms = 0.0;
  bool range_check_pass = false;
  std::vector<MeasurementPoint> excluded_points;  // sorted by d/H
};

/// Compares a model curve against the reliable points of a dataset. A point
/// takes part when the curve carries a converged value at exactly its d/H;
/// everything else is listed as excluded. Throws EmptyOverlap.
ValidationReport residuals(std::span<const CurvePoint> curve, const Dataset& dataset,
                           std::string model_label = "model");

/// Evaluates the pairwise model at every measured spacing, then residuals().
ValidationReport validate_model(const Dataset& dataset, double t_over_h, const CollisionParams& params);

inline constexpr double kRangeLow = 1.0;
inline constexpr double kRangeHigh = 1.6;

/// True iff every reliable point's v_norm lies in [lo, hi].
bool range_check(const Dataset& dataset, double lo = kRangeLow, double hi = kRangeHigh);

}  // namespace domino
