#include "domino/validation.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "domino/error.hpp"

namespace domino {

namespace {

using Pair = std::pair<double, double>;

// Appendix tables of the reference measurements, (d/H, v/sqrt(gH)).
constexpr std::array<Pair, 9> kVerticalTable{{{0.04, 1.07}, {0.14, 1.33}, {0.23, 1.53},
                                              {0.33, 1.51}, {0.43, 1.47}, {0.53, 1.50},
                                              {0.62, 1.40}, {0.72, 1.33}, {0.82, 1.23}}};
constexpr std::array<Pair, 4> kHorizontalTable{{{0.28, 1.15}, {0.47, 1.19}, {0.67, 1.15}, {0.87, 0.68}}};

bool flagged_unreliable(double d, Orientation o, ReliabilityReading reading) {
  if (reading == ReliabilityReading::ExtremesPerTable) {
    return o == Orientation::Vertical ? (d == 0.04 || d == 0.82) : (d == 0.28 || d == 0.87);
  }
  return d == 0.04 || d == 0.14 || d == 0.82 || d == 0.87;
}

template <std::size_t N>
Dataset table_dataset(std::string name, const std::array<Pair, N>& table, Orientation o,
                      ReliabilityReading reading) {
  Dataset ds{std::move(name), {}};
  for (const auto& [d, v] : table) {
    ds.points.push_back({d, v, o, !flagged_unreliable(d, o, reading), "larham"});
  }
  return ds;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "row " + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& field, std::size_t line, const char* column) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    parse_error(line, std::string(column) + " is not a number: '" + field + "'");
  }
  return value;
}

}  // namespace

const char* to_string(Orientation orientation) noexcept {
  switch (orientation) {
    case Orientation::Vertical: return "vertical";
    case Orientation::Horizontal: return "horizontal";
    case Orientation::External: return "external";
  }
  return "unknown";
}

void Dataset::validate() const {
  if (points.empty()) throw Error(ErrorCode::InvalidParameter, "dataset '" + name + "' is empty");
  std::set<double> seen;
  for (const auto& p : points) {
    if (!(p.d_over_h > 0.0) || !(p.v_norm > 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "dataset '" + name + "' has a non-positive d/H or speed");
    }
    if (!seen.insert(p.d_over_h).second) {
      throw Error(ErrorCode::DuplicateSpacing,
                  "dataset '" + name + "' repeats d/H = " + std::to_string(p.d_over_h));
    }
  }
}

Dataset builtin_dataset(std::string_view name, ReliabilityReading reading) {
  if (name == "larham_vertical") {
    return table_dataset("larham_vertical", kVerticalTable, Orientation::Vertical, reading);
  }
  if (name == "larham_horizontal") {
    return table_dataset("larham_horizontal", kHorizontalTable, Orientation::Horizontal, reading);
  }
  throw Error(ErrorCode::UnknownDataset, "unknown dataset '" + std::string(name) +
                                             "' (known: larham_vertical, larham_horizontal)");
}

std::vector<std::string> builtin_dataset_names() { return {"larham_vertical", "larham_horizontal"}; }

Dataset load_dataset_csv(std::istream& in, std::string name) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) parse_error(1, "missing header row");
  ++line_no;
  const auto header = split_csv(line);
  const std::vector<std::string> expected{"d_over_H", "v_norm", "reliable", "source"};
  if (header != expected) parse_error(line_no, "header must be d_over_H,v_norm,reliable,source");

  Dataset ds{std::move(name), {}};
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != expected.size()) {
      parse_error(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
    }
    MeasurementPoint p;
    p.d_over_h = parse_number(fields[0], line_no, "d_over_H");
    p.v_norm = parse_number(fields[1], line_no, "v_norm");
    if (fields[2] == "1") {
      p.reliable = true;
    } else if (fields[2] == "0") {
      p.reliable = false;
    } else {
      parse_error(line_no, "reliable must be 0 or 1, got '" + fields[2] + "'");
    }
    p.source = fields[3];
    p.orientation = Orientation::External;
    if (!(p.d_over_h > 0.0) || !(p.v_norm > 0.0)) parse_error(line_no, "d_over_H and v_norm must be positive");
    ds.points.push_back(std::move(p));
  }
  if (ds.points.empty()) parse_error(line_no, "no data rows");
  ds.validate();
  return ds;
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  auto stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  return load_dataset_csv(in, stem);
}

ValidationReport residuals(std::span<const CurvePoint> curve, const Dataset& dataset, std::string model_label) {
  ValidationReport report;
  report.model_label = std::move(model_label);
  report.dataset_name = dataset.name;

  for (const auto& p : dataset.points) {
    const auto match = std::find_if(curve.begin(), curve.end(), [&](const CurvePoint& c) {
      return std::abs(c.d_over_h - p.d_over_h) <= 1e-12 && c.status == SpeedStatus::Converged;
    });
    if (!p.reliable || match == curve.end()) {
      report.excluded_points.push_back(p);
      continue;
    }
    report.residuals.push_back({p.d_over_h, p.v_norm, match->normalized_speed, match->normalized_speed - p.v_norm});
  }
  if (report.residuals.empty()) {
    throw Error(ErrorCode::EmptyOverlap, "no reliable point of '" + dataset.name + "' lies in the model domain");
  }

  auto by_spacing = [](const auto& a, const auto& b) { return a.d_over_h < b.d_over_h; };
  std::sort(report.residuals.begin(), report.residuals.end(), by_spacing);
  std::sort(report.excluded_points.begin(), report.excluded_points.end(), by_spacing);

  double sum = 0.0;
  for (const auto& r : report.residuals) sum += r.residual * r.residual;
  report.rms = std::sqrt(sum / static_cast<double>(report.residuals.size()));
  report.range_check_pass = range_check(dataset);
  return report;
}

ValidationReport validate_model(const Dataset& dataset, double t_over_h, const CollisionParams& params) {
  std::vector<double> spacings;
  for (const auto& p : dataset.points) spacings.push_back(p.d_over_h);
  const auto curve = speed_curve(t_over_h, params, spacings);
  std::ostringstream label;
  label << "pairwise e=" << params.restitution() << " t/H=" << t_over_h;
  return residuals(curve, dataset, label.str());
}

bool range_check(const Dataset& dataset, double lo, double hi) {
  return std::all_of(dataset.points.begin(), dataset.points.end(), [&](const MeasurementPoint& p) {
    return !p.reliable || (p.v_norm >= lo && p.v_norm <= hi);
  });
}

}  // namespace domino
