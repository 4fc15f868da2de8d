// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "domino/acoustics.hpp"
#include "domino/error.hpp"
#include "domino/validation.hpp"
#include "domino/wave_model.hpp"

using namespace domino;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Pre-build oracle value (mpmath, 50 digits) for d/H = 0.5, t/H = 0.15, e = 0.7.
constexpr double kReferenceSpeed = 1.34444569432445040;

Outcome dataset_fidelity() {
  struct Row {
    const char* table;
    double d, v;
  };
  const Row rows[] = {{"larham_vertical", 0.04, 1.07},  {"larham_vertical", 0.14, 1.33},
                      {"larham_vertical", 0.23, 1.53},  {"larham_vertical", 0.33, 1.51},
                      {"larham_vertical", 0.43, 1.47},  {"larham_vertical", 0.53, 1.50},
                      {"larham_vertical", 0.62, 1.40},  {"larham_vertical", 0.72, 1.33},
                      {"larham_vertical", 0.82, 1.23},  {"larham_horizontal", 0.28, 1.15},
                      {"larham_horizontal", 0.47, 1.19}, {"larham_horizontal", 0.67, 1.15},
                      {"larham_horizontal", 0.87, 0.68}};
  const auto v = builtin_dataset("larham_vertical");
  const auto h = builtin_dataset("larham_horizontal");
  if (v.points.size() + h.points.size() != 13) return {false, "point count differs from 13"};
  std::size_t iv = 0, ih = 0;
  for (const auto& r : rows) {
    const bool vert = std::string(r.table) == "larham_vertical";
    const auto& p = vert ? v.points[iv++] : h.points[ih++];
    if (p.d_over_h != r.d || p.v_norm != r.v) return {false, fmt("mismatch at d/H=%.2f", r.d)};
  }
  return {true, "13 points match"};
}

Outcome range_claim() {
  const bool v = range_check(builtin_dataset("larham_vertical"));
  const bool h = range_check(builtin_dataset("larham_horizontal"));
  return {v && h, fmt("vertical=%s horizontal=%s", v ? "pass" : "fail", h ? "pass" : "fail")};
}

Outcome practical_limit() {
  const CollisionParams params(kDefaultRestitution);
  bool rejected = false;
  try {
    limiting_speed(make_ratio_array(0.88, 0.15), params);
  } catch (const Error& e) {
    rejected = e.code() == ErrorCode::NonPropagating;
  }
  const auto ok = evaluate_speed(make_ratio_array(0.86, 0.15), params);
  const bool accepted = ok.status == SpeedStatus::Converged && std::isfinite(ok.normalized_speed);
  return {rejected && accepted, fmt("0.88 NonPropagating=%d, 0.86 v=%.6f", rejected, ok.normalized_speed)};
}

Outcome scale_invariance() {
  const CollisionParams params(0.7);
  std::vector<double> v;
  for (double h : {0.05, 0.2, 0.8}) v.push_back(limiting_speed(make_ratio_array(0.5, 0.15, h), params).normalized_speed);
  const double spread = std::max({v[0], v[1], v[2]}) - std::min({v[0], v[1], v[2]});
  return {spread <= 1e-9, fmt("spread %.3g over H = 0.05, 0.2, 0.8", spread)};
}

Outcome fixed_point_consistency() {
  const auto spec = make_ratio_array(0.5, 0.15, 1.0, 100);
  const CollisionParams params(0.7);
  const double omega_star = limiting_omega(spec, params);

  // Start well away from the fixed point: a gentle push of 0.5 rad/s.
  const auto periods = simulate_chain(spec, params, 0.5).periods();
  const double mean = std::accumulate(periods.end() - 50, periods.end(), 0.0) / 50.0;
  const double expected = fall_time(spec, omega_star);
  const double period_err = std::abs(mean - expected) / expected;

  double omega = 0.5;
  for (int k = 0; k < 200; ++k) omega = collision_map(spec, params, omega);
  const double omega_err = std::abs(omega - omega_star);

  return {period_err <= 1e-3 && omega_err <= 1e-9,
          fmt("period rel. err %.3g, |omega* - iterate| %.3g", period_err, omega_err)};
}

Outcome divergence() {
  const auto spec = make_ratio_array(0.5, 0.15, 1.0, 51);
  const CollisionParams params(1.0);
  const auto pred = evaluate_speed(spec, params);
  const auto series = simulate_chain(spec, params, 0.5);
  bool increasing = series.post_impact_omegas.size() == 50;
  for (std::size_t i = 1; i < series.post_impact_omegas.size(); ++i) {
    increasing = increasing && series.post_impact_omegas[i] > series.post_impact_omegas[i - 1];
  }
  return {pred.status == SpeedStatus::Divergent && series.divergent && increasing,
          fmt("status %s, 50 strictly increasing post-impact speeds: %s", to_string(pred.status),
              increasing ? "yes" : "no")};
}

Outcome analyzer_recovery() {
  const double duration = 30.0;
  int bad = 0, cases = 0;
  double worst10 = 0.0;
  int flagged0 = 0, close0 = 0;
  for (double rate : {5.0, 10.0, 20.0, 40.0, 60.0}) {
    for (std::uint64_t seed : {1u, 2u}) {
      std::vector<double> times;
      for (double t = 0.5 / rate; t < duration - 0.01; t += 1.0 / rate) times.push_back(t);
      for (double snr : {10.0, 0.0}) {
        SynthesisParams p;
        p.snr_db = snr;
        p.duration = duration;
        p.noise_seed = seed * 1000 + static_cast<std::uint64_t>(rate);
        const auto m = wave_speed_from_recording(synthesize_collapse(times, p, 44100), 0.05, 0.05);
        const double err = std::abs(m.rate.rate_hz - rate) / rate;
        ++cases;
        if (snr == 10.0) {
          worst10 = std::max(worst10, err);
          if (err > 0.01) ++bad;
        } else {
          if (!m.rate.reliable) ++flagged0;
          else if (err <= 0.05) ++close0;
          else ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%d cases, worst error at 10 dB %.3g%%, at 0 dB %d flagged / %d within 5%%, failures %d",
                        cases, 100.0 * worst10, flagged0, close0, bad)};
}

Outcome round_trip() {
  const double height = 0.05;
  const auto spec = make_ratio_array(0.5, 0.15, height, 150);
  const CollisionParams params(0.7);
  const auto series = simulate_chain(spec, params, 0.5 * limiting_omega(spec, params));
  std::vector<double> times = series.impact_times;
  for (double& t : times) t += 0.2;  // lead-in silence
  SynthesisParams p;
  p.snr_db = 30.0;
  const auto m = wave_speed_from_recording(synthesize_collapse(times, p, 44100), spec.pitch(), height);
  const double predicted = limiting_speed(spec, params).normalized_speed;
  const double err = std::abs(m.normalized_speed - predicted) / predicted;
  const double oracle_err = std::abs(predicted - kReferenceSpeed) / kReferenceSpeed;
  return {err <= 0.02 && oracle_err <= 1e-9 && m.rate.reliable,
          fmt("measured %.5f vs model %.5f (%.3g%%), reliable=%d", m.normalized_speed, predicted, 100.0 * err,
              m.rate.reliable)};
}

Outcome calibration_fit() {
  const auto fit = calibrate_restitution(builtin_dataset("larham_vertical"), 0.15);

  Dataset synthetic{"model", {}};
  const CollisionParams truth(0.6);
  for (double d : make_grid(0.1, 0.8, 0.05)) {
    synthetic.points.push_back(
        {d, limiting_speed(make_ratio_array(d, 0.15), truth).normalized_speed, Orientation::External, true, "model"});
  }
  const auto self = calibrate_restitution(synthetic, 0.15);
  const bool fit_ok = fit.rms <= 0.15;
  const bool self_ok = std::abs(self.restitution - 0.6) <= 0.002;
  return {fit_ok && self_ok, fmt("table fit e*=%.4f rms=%.4f (limit 0.15): %s; self-calibration e=%.4f: %s",
                                 fit.restitution, fit.rms, fit_ok ? "ok" : "exceeds", self.restitution,
                                 self_ok ? "ok" : "off")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 dataset fidelity", dataset_fidelity},
      {"2 range claim", range_claim},
      {"3 practical limit", practical_limit},
      {"4 scale invariance", scale_invariance},
      {"5 fixed-point consistency", fixed_point_consistency},
      {"6 divergence", divergence},
      {"7 analyzer recovery", analyzer_recovery},
      {"8 end-to-end round trip", round_trip},
      {"9 calibration fit", calibration_fit},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-28s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
