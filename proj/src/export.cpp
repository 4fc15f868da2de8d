#include "domino/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "domino/error.hpp"
#include "domino/geometry.hpp"
#include "json.hpp"

namespace domino {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "d_over_H,normalized_speed,status\n";
  for (const auto& c : curve) {
    out += num(c.d_over_h) + ',' + num(c.normalized_speed) + ',' + to_string(c.status) + '\n';
  }
  return out;
}

std::string dataset_csv(const Dataset& dataset) {
  std::string out = "d_over_H,v_norm,reliable,source\n";
  for (const auto& p : dataset.points) {
    out += num(p.d_over_h) + ',' + num(p.v_norm) + ',' + (p.reliable ? "1" : "0") + ',' + csv_field(p.source) + '\n';
  }
  return out;
}

std::string report_csv(const ValidationReport& report) {
  // One row per dataset point; excluded points carry empty model columns.
  struct Row {
    double d, measured, model, residual;
    bool included;
  };
  std::vector<Row> rows;
  for (const auto& r : report.residuals) rows.push_back({r.d_over_h, r.measured, r.model, r.residual, true});
  for (const auto& p : report.excluded_points) rows.push_back({p.d_over_h, p.v_norm, NAN, NAN, false});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.d < b.d; });

  std::string out = "d_over_H,measured,model,residual,included\n";
  for (const auto& r : rows) {
    out += num(r.d) + ',' + num(r.measured) + ',' + num(r.model) + ',' + num(r.residual) + ',' +
           (r.included ? "1" : "0") + '\n';
  }
  return out;
}

std::string report_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["model_label"] = report.model_label;
  j["dataset"] = report.dataset_name;
  j["residuals"] = nlohmann::ordered_json::array();
  for (const auto& r : report.residuals) {
    j["residuals"].push_back(
        {{"d_over_H", r.d_over_h}, {"measured", r.measured}, {"model", r.model}, {"residual", r.residual}});
  }
  j["rms"] = report.rms;
  j["range_check_pass"] = report.range_check_pass;
  j["excluded_points"] = nlohmann::ordered_json::array();
  for (const auto& p : report.excluded_points) {
    j["excluded_points"].push_back({{"d_over_H", p.d_over_h},
                                    {"v_norm", p.v_norm},
                                    {"reliable", p.reliable},
                                    {"orientation", to_string(p.orientation)}});
  }
  return j.dump(2);
}

std::string impacts_csv(const ImpactSeries& series) {
  std::string out = "index,time_s,pre_impact_omega,post_impact_omega\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    // Times keep full precision: they drive synthesis.
    char t[40];
    std::snprintf(t, sizeof t, "%.17g", series.impact_times[i]);
    out += std::to_string(i + 1) + ',' + t + ',' + num(series.pre_impact_omegas[i]) + ',' +
           num(series.post_impact_omegas[i]) + '\n';
  }
  return out;
}

std::vector<double> load_impact_times(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "row 1: missing header row");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
  }
  const auto col = std::find_if(header.begin(), header.end(), [](const std::string& h) {
    return h == "time_s" || h == "time_s\r";
  });
  if (col == header.end()) throw Error(ErrorCode::ParseError, "row 1: no time_s column");
  const auto index = static_cast<std::size_t>(col - header.begin());

  std::vector<double> times;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string field;
    std::size_t i = 0;
    bool found = false;
    while (std::getline(ss, field, ',')) {
      if (i++ == index) {
        found = true;
        break;
      }
    }
    double t = 0.0;
    const auto* end = field.data() + field.size();
    if (!found || std::from_chars(field.data(), end, t).ptr != end) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(line_no) + ": bad time_s value");
    }
    times.push_back(t);
  }
  return times;
}

std::string svg_plot(std::span<const CurvePoint> curve, std::span<const Dataset> datasets, const std::string& title) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  double y_max = 2.0;
  for (const auto& c : curve) {
    if (c.status == SpeedStatus::Converged) y_max = std::max(y_max, c.normalized_speed);
  }
  for (const auto& ds : datasets) {
    for (const auto& p : ds.points) y_max = std::max(y_max, p.v_norm);
  }
  y_max = std::ceil(y_max * 1.1 * 2.0) / 2.0;
  const double x_max = 1.0;
  auto px = [&](double x) { return kLeft + x / x_max * (kWidth - kLeft - kRight); };
  auto py = [&](double y) { return kHeight - kBottom - y / y_max * (kHeight - kTop - kBottom); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
     << "</text>\n";

  // Axes, ticks and the practical spacing limit.
  os << "<g stroke=\"black\" fill=\"none\">\n"
     << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(x_max) << "\" y2=\"" << py(0) << "\"/>\n"
     << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(0) << "\" y2=\"" << py(y_max) << "\"/>\n"
     << "</g>\n<g font-size=\"11\" text-anchor=\"middle\">\n";
  for (int i = 0; i <= 10; ++i) {
    const double x = i * 0.1;
    os << "<text x=\"" << px(x) << "\" y=\"" << py(0) + 16 << "\">" << num(x) << "</text>\n";
  }
  for (double y = 0.0; y <= y_max + 1e-9; y += 0.5) {
    os << "<text x=\"" << px(0) - 18 << "\" y=\"" << py(y) + 4 << "\">" << num(y) << "</text>\n";
  }
  os << "<text x=\"" << (px(0) + px(x_max)) / 2 << "\" y=\"" << kHeight - 12 << "\">d/H</text>\n"
     << "<text x=\"16\" y=\"" << (py(0) + py(y_max)) / 2 << "\" transform=\"rotate(-90 16 "
     << (py(0) + py(y_max)) / 2 << ")\">v/sqrt(gH)</text>\n</g>\n"
     << "<line x1=\"" << px(kPracticalSpacingLimit) << "\" y1=\"" << py(0) << "\" x2=\""
     << px(kPracticalSpacingLimit) << "\" y2=\"" << py(y_max)
     << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";

  // Model curve, broken wherever a point did not converge.
  std::vector<std::vector<std::pair<double, double>>> runs(1);
  for (const auto& c : curve) {
    if (c.status == SpeedStatus::Converged && std::isfinite(c.normalized_speed)) {
      runs.back().emplace_back(px(c.d_over_h), py(c.normalized_speed));
    } else if (!runs.back().empty()) {
      runs.emplace_back();
    }
  }
  for (const auto& run : runs) {
    if (run.size() < 2) continue;
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : run) os << x << ',' << y << ' ';
    os << "\"/>\n";
  }

  // Markers: + vertical, x horizontal, square external; grey when unreliable.
  constexpr double r = 5.0;
  for (const auto& ds : datasets) {
    os << "<g class=\"dataset\" data-name=\"" << xml_escape(ds.name) << "\" fill=\"none\">\n";
    for (const auto& p : ds.points) {
      const double x = px(p.d_over_h);
      const double y = py(p.v_norm);
      const char* colour = p.reliable ? "black" : "#999999";
      switch (p.orientation) {
        case Orientation::Vertical:
          os << "<path stroke=\"" << colour << "\" d=\"M" << x - r << ' ' << y << "H" << x + r << "M" << x << ' '
             << y - r << "V" << y + r << "\"/>\n";
          break;
        case Orientation::Horizontal:
          os << "<path stroke=\"" << colour << "\" d=\"M" << x - r << ' ' << y - r << "L" << x + r << ' ' << y + r
             << "M" << x - r << ' ' << y + r << "L" << x + r << ' ' << y - r << "\"/>\n";
          break;
        case Orientation::External:
          os << "<rect stroke=\"" << colour << "\" x=\"" << x - r << "\" y=\"" << y - r << "\" width=\"" << 2 * r
             << "\" height=\"" << 2 * r << "\"/>\n";
          break;
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace domino
