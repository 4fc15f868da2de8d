#pragma once

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "domino/dataset.hpp"
#include "domino/validation.hpp"
#include "domino/wave_model.hpp"

namespace domino {

// CSV writers use a fixed column order and %.6g number formatting.

std::string curve_csv(std::span<const CurvePoint> curve);
std::string dataset_csv(const Dataset& dataset);
std::string report_csv(const ValidationReport& report);
std::string report_json(const ValidationReport& report);
std::string impacts_csv(const ImpactSeries& series);

/// Reads the time_s column written by impacts_csv. Throws ParseError.
std::vector<double> load_impact_times(std::istream& in);

/// Scatter/line plot: the curve as a polyline, measurements as markers
/// shaped by orientation, hollow when unreliable.
std::string svg_plot(std::span<const CurvePoint> curve, std::span<const Dataset> datasets,
                     const std::string& title = "Domino wave speed");

}  // namespace domino
