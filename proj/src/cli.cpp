#include "domino/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "domino/acoustics.hpp"
#include "domino/error.hpp"
#include "domino/export.hpp"
#include "domino/geometry.hpp"
#include "domino/validation.hpp"
#include "domino/wave_model.hpp"
#include "domino/wav.hpp"
#include "json.hpp"

namespace domino::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPropagating:
    case ErrorCode::Divergent:
    case ErrorCode::OverlappingSpacing:
    case ErrorCode::NonFalling:
    case ErrorCode::EmptyOverlap:
    case ErrorCode::InsufficientData:
      return kPhysicalDomain;
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::MalformedContainer:
    case ErrorCode::UnsupportedEncoding:
    case ErrorCode::RateTooLow:
    case ErrorCode::InvalidSignal:
    case ErrorCode::TooShort:
    case ErrorCode::UnknownDataset:
    case ErrorCode::DuplicateSpacing:
      return kIoOrParse;
    default:
      return kUsage;
  }
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, colon), &used);
    const double b = std::stod(text.substr(colon + 1), &used);
    return {a, b};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + " must look like lo:hi, got '" + text + "'");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string piece;
  try {
    while (std::getline(ss, piece, ':')) parts.push_back(std::stod(piece));
  } catch (const std::exception&) {
    parts.clear();
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::InvalidParameter, "--grid must look like lo:hi:step, got '" + text + "'");
  }
  return make_grid(parts[0], parts[1], parts[2]);
}

Dataset resolve_dataset(const std::string& name) {
  const auto names = builtin_dataset_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return builtin_dataset(name);
  if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") return load_dataset_file(name);
  return builtin_dataset(name);  // throws UnknownDataset
}

struct Options {
  double d_over_h = 0.0;
  double t_over_h = kDefaultThicknessRatio;
  double restitution = kDefaultRestitution;
  double height = 0.0;
  double gap = 0.0;
  double thickness = 0.0;
  double width = 0.0;
  double mass = 0.01;
  std::size_t count = 100;
  double omega_init = 0.0;
  std::string grid = "0.05:0.85:0.05";
  std::string out;
  std::string svg;
  std::string impacts;
  int rate = 44100;
  double snr_db = 30.0;
  std::uint64_t seed = 1;
  double click_duration = 0.005;
  double click_decay = 600.0;
  double duration = 0.0;
  std::string input;
  double pitch = 0.0;
  std::string band = "4:100";
  std::string dataset;
  bool json = false;
  std::string config;
};

int cmd_predict(const Options& o, CLI::App& sub, std::ostream& out) {
  const double h = sub.count("--height") ? o.height : 1.0;
  const auto spec = make_ratio_array(o.d_over_h, o.t_over_h, h);
  const auto pred = limiting_speed(spec, CollisionParams(o.restitution));
  if (o.json) {
    nlohmann::ordered_json j;
    j["d_over_H"] = o.d_over_h;
    j["t_over_H"] = o.t_over_h;
    j["restitution"] = o.restitution;
    j["normalized_speed"] = pred.normalized_speed;
    if (sub.count("--height")) {
      j["height_m"] = h;
      j["wave_speed_mps"] = pred.wave_speed;
      j["collision_period_s"] = pred.collision_period;
      j["fixed_point_omega"] = pred.fixed_point_omega;
    }
    out << j.dump(2) << '\n';
  } else {
    out << "normalized_speed=" << fmt6(pred.normalized_speed) << '\n';
    if (sub.count("--height")) {
      out << "wave_speed_mps=" << fmt6(pred.wave_speed) << '\n'
          << "collision_period_s=" << fmt6(pred.collision_period) << '\n'
          << "fixed_point_omega=" << fmt6(pred.fixed_point_omega) << '\n';
    }
  }
  return kSuccess;
}

int cmd_curve(const Options& o, std::ostream& out) {
  const auto grid = parse_grid(o.grid);
  const auto curve = speed_curve(o.t_over_h, CollisionParams(o.restitution), grid);
  const auto csv = curve_csv(curve);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text_file(o.out, csv);
    out << "wrote " << curve.size() << " rows to " << o.out << '\n';
  }
  if (!o.svg.empty()) write_text_file(o.svg, svg_plot(curve, {}));
  return kSuccess;
}

int cmd_simulate(const Options& o, CLI::App& sub, std::ostream& out, std::ostream& err) {
  const double thickness = sub.count("--thickness") ? o.thickness : o.t_over_h * o.height;
  const double width = o.width > 0.0 ? o.width : 0.5 * o.height;
  const auto spec = make_array_spec({o.height, thickness, width, o.mass}, o.gap, o.count);
  const CollisionParams params(o.restitution);
  double omega = o.omega_init;
  if (!sub.count("--omega-init")) {
    omega = params.transfer() < 1.0 ? limiting_omega(spec, params) : std::sqrt(energy_gain(spec));
  }
  const auto series = simulate_chain(spec, params, omega);
  const auto csv = impacts_csv(series);
  if (o.out.empty()) {
    out << csv;
  } else {
    write_text_file(o.out, csv);
    out << "wrote " << series.size() << " impacts to " << o.out << '\n';
  }
  if (series.divergent) {
    err << "Divergent: restitution e = 1 accelerates the wave at every collision\n";
    return kPhysicalDomain;
  }
  return kSuccess;
}

int cmd_synth(const Options& o, std::ostream& out) {
  std::ifstream in(o.impacts);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + o.impacts);
  const auto times = load_impact_times(in);
  SynthesisParams p;
  p.click_duration = o.click_duration;
  p.click_decay = o.click_decay;
  p.snr_db = o.snr_db;
  p.noise_seed = o.seed;
  p.duration = o.duration;
  const auto signal = synthesize_collapse(times, p, o.rate);
  write_wav_file(o.out, signal);
  out << "wrote " << fmt6(signal.duration()) << " s at " << o.rate << " Hz to " << o.out << '\n';
  return kSuccess;
}

int cmd_analyze(const Options& o, std::ostream& out, std::ostream& err) {
  const auto signal = read_wav_file(o.input);
  const auto [lo, hi] = parse_pair(o.band, "--band");
  const auto m = wave_speed_from_recording(signal, o.pitch, o.height, RateBand{lo, hi});
  out << (o.json ? to_json(m) + '\n' : to_key_value(m));
  if (!m.rate.reliable) {
    err << "analysis is unreliable: no stable impact rate above " << kReliableSnrDb << " dB\n";
    return kPhysicalDomain;
  }
  return kSuccess;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  const auto ds = resolve_dataset(o.dataset);
  const auto fit = calibrate_restitution(ds, o.t_over_h);
  if (o.json) {
    nlohmann::ordered_json j;
    j["dataset"] = ds.name;
    j["t_over_H"] = o.t_over_h;
    j["e_star"] = fit.restitution;
    j["rms"] = fit.rms;
    j["points"] = fit.points_used;
    out << j.dump(2) << '\n';
  } else {
    out << "e_star=" << fmt6(fit.restitution) << '\n' << "rms=" << fmt6(fit.rms) << '\n'
        << "points=" << fit.points_used << '\n';
  }
  return kSuccess;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto ds = resolve_dataset(o.dataset);
  const CollisionParams params(o.restitution);
  const auto report = validate_model(ds, o.t_over_h, params);
  if (!o.out.empty()) write_text_file(o.out, report_csv(report));
  if (!o.svg.empty()) {
    const auto curve = speed_curve(o.t_over_h, params, make_grid(0.02, kPracticalSpacingLimit, 0.01));
    write_text_file(o.svg, svg_plot(curve, std::span<const Dataset>(&ds, 1)));
  }
  if (o.json) {
    out << report_json(report) << '\n';
  } else {
    out << "model=" << report.model_label << '\n'
        << "dataset=" << report.dataset_name << '\n'
        << "points=" << report.residuals.size() << '\n'
        << "excluded=" << report.excluded_points.size() << '\n'
        << "rms=" << fmt6(report.rms) << '\n'
        << "range_check=" << (report.range_check_pass ? "pass" : "fail") << '\n';
  }
  return kSuccess;
}

// Explicit flags win: config entries are appended only for options the
// selected subcommand defines and the command line does not already set.
std::vector<std::string> merge_config(const std::vector<std::string>& args, CLI::App& app) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[0]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : read_config(path)) {
    const std::string flag = "--" + key;
    if (key == "config" || sub->get_option_no_throw(flag) == nullptr) continue;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) merged.push_back(flag + "=" + value);
  }
  return merged;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t line_no = 0;
  auto strip = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(line_no) + ": expected key=value in " + path);
    }
    entries.emplace_back(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
  }
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Domino wave speed: pairwise toppling model, acoustic measurement and validation", "domino"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "key=value file; explicit flags override it");
    sub->add_flag("--json", o.json, "JSON output");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--t-over-h", o.t_over_h, "thickness ratio t/H")->capture_default_str();
    sub->add_option("--e", o.restitution, "coefficient of restitution")->capture_default_str();
  };

  auto* predict = app.add_subcommand("predict", "limiting wave speed for given ratios");
  predict->add_option("--d-over-h", o.d_over_h, "spacing ratio d/H")->required();
  predict->add_option("--height", o.height, "domino height [m] for absolute output");
  add_model(predict);
  add_common(predict);

  auto* curve = app.add_subcommand("curve", "normalized speed over a d/H grid");
  curve->add_option("--grid", o.grid, "lo:hi:step")->capture_default_str();
  curve->add_option("--out", o.out, "CSV output path (stdout if omitted)");
  curve->add_option("--svg", o.svg, "SVG plot path");
  add_model(curve);
  add_common(curve);

  auto* simulate = app.add_subcommand("simulate", "impact times of a finite chain");
  simulate->add_option("--height", o.height, "domino height [m]")->required();
  simulate->add_option("--gap", o.gap, "gap between dominoes [m]")->required();
  simulate->add_option("--thickness", o.thickness, "domino thickness [m] (default t/H * height)");
  simulate->add_option("--width", o.width, "domino width [m]");
  simulate->add_option("--mass", o.mass, "domino mass [kg]");
  simulate->add_option("--count", o.count, "number of dominoes")->capture_default_str();
  simulate->add_option("--omega-init", o.omega_init, "initial angular speed [rad/s] (default: fixed point)");
  simulate->add_option("--out", o.out, "CSV output path (stdout if omitted)");
  add_model(simulate);
  add_common(simulate);

  auto* synth = app.add_subcommand("synth", "synthesise a collapse recording from impact times");
  synth->add_option("--impacts", o.impacts, "impact CSV from simulate")->required();
  synth->add_option("--rate", o.rate, "sample rate [Hz]")->capture_default_str();
  synth->add_option("--snr-db", o.snr_db, "background SNR [dB]")->capture_default_str();
  synth->add_option("--seed", o.seed, "noise seed")->capture_default_str();
  synth->add_option("--click-duration", o.click_duration, "click length [s]")->capture_default_str();
  synth->add_option("--click-decay", o.click_decay, "click decay [1/s]")->capture_default_str();
  synth->add_option("--duration", o.duration, "total length [s], 0 = automatic")->capture_default_str();
  synth->add_option("--out", o.out, "WAV output path")->required();
  add_common(synth);

  auto* analyze = app.add_subcommand("analyze", "measure wave speed from a WAV recording");
  analyze->add_option("input", o.input, "PCM16 WAV file")->required();
  analyze->add_option("--pitch", o.pitch, "domino pitch d + t [m]")->required();
  analyze->add_option("--height", o.height, "domino height [m]")->required();
  analyze->add_option("--band", o.band, "impact-rate search band lo:hi [Hz]")->capture_default_str();
  add_common(analyze);

  auto* calibrate = app.add_subcommand("calibrate", "fit restitution to a dataset");
  calibrate->add_option("--dataset", o.dataset, "builtin name or CSV path")->required();
  calibrate->add_option("--t-over-h", o.t_over_h, "thickness ratio t/H")->capture_default_str();
  add_common(calibrate);

  auto* validate = app.add_subcommand("validate", "compare the model with a dataset");
  validate->add_option("--dataset", o.dataset, "builtin name or CSV path")->required();
  validate->add_option("--out", o.out, "report CSV path");
  validate->add_option("--svg", o.svg, "SVG plot path");
  add_model(validate);
  add_common(validate);

  try {
    auto merged = merge_config(args, app);
    std::reverse(merged.begin(), merged.end());  // CLI11 consumes from the back
    app.parse(merged);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }

  try {
    if (*predict) return cmd_predict(o, *predict, out);
    if (*curve) return cmd_curve(o, out);
    if (*simulate) return cmd_simulate(o, *simulate, out, err);
    if (*synth) return cmd_synth(o, out);
    if (*analyze) return cmd_analyze(o, out, err);
    if (*calibrate) return cmd_calibrate(o, out);
    if (*validate) return cmd_validate(o, out);
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace domino::cli
