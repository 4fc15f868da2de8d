#include "domino/acoustics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "domino/error.hpp"
#include "domino/filter.hpp"
#include "domino/geometry.hpp"
#include "json.hpp"

namespace domino {

namespace {

constexpr double kMinEnvelopeInput = 0.5;     // [s]
constexpr double kMinSpectrumLength = 0.25;   // [s]
constexpr double kMinTrimInput = 2.0;         // [s]
constexpr double kHarmonicRatio = 0.8;
constexpr double kImpactThreshold = 0.3;      // fraction of median-to-typical-peak span
constexpr double kImpactRefractory = 0.35;    // fraction of the hinted period

// FFTW's planner is not re-entrant.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> magnitude_spectrum(std::vector<double> padded) {
  const std::size_t n = padded.size();
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), padded.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> mags(n / 2 + 1);
  for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::hypot(out[k][0], out[k][1]);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return mags;
}

double quantile(std::vector<double> values, double q) {
  const auto k = static_cast<std::size_t>(q * static_cast<double>(values.size() - 1));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

void remove_mean(std::vector<double>& x) {
  if (x.empty()) return;
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / static_cast<double>(x.size());
  for (double& v : x) v -= mean;
}

bool agree(double a, double b) {
  return std::isfinite(a) && std::isfinite(b) && std::abs(a - b) <= kTrimAgreement * std::max(a, b);
}

}  // namespace

SampledSignal synthesize_collapse(std::span<const double> impact_times, const SynthesisParams& params,
                                  int sample_rate) {
  if (impact_times.empty()) throw Error(ErrorCode::EmptyImpactList, "no impacts to synthesise");
  for (std::size_t i = 0; i < impact_times.size(); ++i) {
    if (!std::isfinite(impact_times[i]) || impact_times[i] < 0.0 ||
        (i > 0 && !(impact_times[i] > impact_times[i - 1]))) {
      throw Error(ErrorCode::InvalidParameter, "impact times must be non-negative and strictly increasing");
    }
  }
  if (!(params.click_duration > 0.0)) throw Error(ErrorCode::InvalidParameter, "click duration must be positive");
  if (!(params.click_decay >= 0.0)) throw Error(ErrorCode::InvalidParameter, "click decay must be non-negative");
  if (sample_rate < 8000) throw Error(ErrorCode::RateTooLow, "synthesis rate must be at least 8000 Hz");

  const double fs = sample_rate;
  const double duration =
      params.duration > 0.0 ? params.duration : impact_times.back() + params.click_duration + 0.1;
  const auto length = static_cast<std::size_t>(std::ceil(duration * fs));

  std::vector<double> x(length, 0.0);
  std::vector<bool> support(length, false);
  std::mt19937_64 click_rng(params.noise_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto click_len = static_cast<std::size_t>(std::ceil(params.click_duration * fs));
  for (double t : impact_times) {
    const auto start = static_cast<std::size_t>(std::ceil(t * fs));
    for (std::size_t j = 0; j < click_len && start + j < length; ++j) {
      const double tau = static_cast<double>(j) / fs;
      x[start + j] += gauss(click_rng) * std::exp(-params.click_decay * tau);
      support[start + j] = true;
    }
  }

  if (std::isfinite(params.snr_db)) {
    double power = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < length; ++i) {
      if (support[i]) {
        power += x[i] * x[i];
        ++n;
      }
    }
    power = n > 0 ? power / static_cast<double>(n) : 0.0;
    const double sigma = std::sqrt(power / std::pow(10.0, params.snr_db / 10.0));
    std::mt19937_64 noise_rng(params.noise_seed ^ 0x9E3779B97F4A7C15ull);
    for (double& v : x) v += sigma * gauss(noise_rng);
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double gain = 0.9 / peak;
    for (double& v : x) v *= gain;
  }
  return {sample_rate, std::move(x)};
}

SampledSignal envelope(const SampledSignal& signal, const EnvelopeConfig& cfg) {
  signal.validate();
  if (signal.duration() < kMinEnvelopeInput) {
    throw Error(ErrorCode::TooShort, "envelope needs at least 0.5 s of signal");
  }
  const double fs = signal.sample_rate;
  std::vector<double> x = signal.samples;

  auto band = butterworth_highpass(cfg.band_order, cfg.band_lo_hz, fs);
  const auto upper = butterworth_lowpass(cfg.band_order, cfg.band_hi_hz, fs);
  band.insert(band.end(), upper.begin(), upper.end());
  filtfilt_in_place(band, x);
  for (double& v : x) v = std::abs(v);
  filtfilt_in_place(butterworth_lowpass(cfg.lowpass_order, cfg.lowpass_hz, fs), x);

  const double step = fs / cfg.output_rate;
  const auto out_len = static_cast<std::size_t>(std::floor(static_cast<double>(x.size() - 1) / step)) + 1;
  std::vector<double> y(out_len);
  for (std::size_t k = 0; k < out_len; ++k) {
    const double pos = static_cast<double>(k) * step;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    y[k] = (i + 1 < x.size()) ? x[i] + frac * (x[i + 1] - x[i]) : x[i];
  }
  remove_mean(y);
  return {cfg.output_rate, std::move(y)};
}

EnvelopeSpectrum modulation_spectrum(const SampledSignal& env) {
  env.validate();
  if (env.duration() < kMinSpectrumLength) {
    throw Error(ErrorCode::TooShort, "modulation spectrum needs at least 0.25 s of envelope");
  }
  const std::size_t n = env.samples.size();
  const std::size_t nfft = std::bit_ceil(4 * n);
  std::vector<double> padded(nfft, 0.0);
  const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    padded[i] = w * env.samples[i];
  }

  EnvelopeSpectrum spec;
  spec.magnitudes = magnitude_spectrum(std::move(padded));
  spec.resolution = static_cast<double>(env.sample_rate) / static_cast<double>(nfft);
  spec.bin_frequencies.resize(spec.magnitudes.size());
  for (std::size_t k = 0; k < spec.bin_frequencies.size(); ++k) {
    spec.bin_frequencies[k] = static_cast<double>(k) * spec.resolution;
  }
  return spec;
}

RateEstimate estimate_rate(const EnvelopeSpectrum& spectrum, RateBand band) {
  const auto& mag = spectrum.magnitudes;
  if (mag.size() < 3 || mag.size() != spectrum.bin_frequencies.size() || !(spectrum.resolution > 0.0)) {
    throw Error(ErrorCode::BandOutOfRange, "spectrum is empty or inconsistent");
  }
  const double top = spectrum.bin_frequencies.back();
  if (!(band.lo_hz >= 0.0) || !(band.hi_hz > band.lo_hz) || band.hi_hz > top) {
    throw Error(ErrorCode::BandOutOfRange, "rate band must satisfy 0 <= lo < hi <= " + std::to_string(top) + " Hz");
  }
  const auto lo = static_cast<std::size_t>(std::ceil(band.lo_hz / spectrum.resolution));
  const auto hi = std::min(mag.size() - 1, static_cast<std::size_t>(std::floor(band.hi_hz / spectrum.resolution)));
  if (hi < lo + 2) throw Error(ErrorCode::BandOutOfRange, "rate band spans fewer than three bins");

  std::size_t peak = lo;
  for (std::size_t k = lo + 1; k <= hi; ++k) {
    if (mag[k] > mag[peak]) peak = k;  // strict: ties stay at the lower bin
  }

  // Prefer the lowest sub-harmonic carrying a comparable line.
  const double peak_freq = static_cast<double>(peak) * spectrum.resolution;
  const double peak_mag = mag[peak];
  for (auto div = static_cast<std::size_t>(std::floor(peak_freq / std::max(band.lo_hz, spectrum.resolution)));
       div >= 2; --div) {
    const double target = peak_freq / static_cast<double>(div);
    const double half_width = std::max(8.0 * spectrum.resolution, 0.03 * target);
    const auto from = std::max(lo, static_cast<std::size_t>(std::ceil((target - half_width) / spectrum.resolution)));
    const auto to = std::min(hi, static_cast<std::size_t>(std::floor((target + half_width) / spectrum.resolution)));
    if (from > to) continue;
    std::size_t best = from;
    for (std::size_t k = from + 1; k <= to; ++k) {
      if (mag[k] > mag[best]) best = k;
    }
    const bool local_max = best > 0 && best + 1 < mag.size() && mag[best] >= mag[best - 1] && mag[best] >= mag[best + 1];
    if (local_max && mag[best] >= kHarmonicRatio * peak_mag) {
      peak = best;
      break;
    }
  }

  double offset = 0.0;
  double height = mag[peak];
  if (peak > 0 && peak + 1 < mag.size()) {
    const double a = mag[peak - 1];
    const double b = mag[peak];
    const double c = mag[peak + 1];
    const double curvature = a - 2.0 * b + c;
    if (curvature < 0.0) {
      offset = 0.5 * (a - c) / curvature;
      height = b - 0.25 * (a - c) * offset;
    }
  }

  std::vector<double> powers;
  powers.reserve(hi - lo + 1);
  for (std::size_t k = lo; k <= hi; ++k) powers.push_back(mag[k] * mag[k]);
  const double median = quantile(std::move(powers), 0.5);
  const double peak_power = height * height;

  RateEstimate est;
  est.rate_hz = (static_cast<double>(peak) + offset) * spectrum.resolution;
  if (peak_power <= 0.0) {
    est.snr_db = 0.0;
  } else if (median <= 0.0) {
    est.snr_db = 300.0;  // finite stand-in for a noiseless line
  } else {
    est.snr_db = 10.0 * std::log10(peak_power / median);
  }
  est.reliable = est.snr_db >= kReliableSnrDb;
  return est;
}

namespace {

struct Peak {
  double time;
  double level;
};

// Local maxima at or above `threshold`; peaks closer than `refractory` are
// merged into the taller one.
std::vector<Peak> pick_peaks(std::span<const double> v, double fs, double threshold, double refractory) {
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] < threshold || v[i] < v[i - 1] || v[i] <= v[i + 1]) continue;
    const double t = static_cast<double>(i) / fs;
    if (!peaks.empty() && t - peaks.back().time < refractory) {
      if (v[i] > peaks.back().level) peaks.back() = {t, v[i]};
      continue;
    }
    peaks.push_back({t, v[i]});
  }
  return peaks;
}

}  // namespace

std::vector<double> detect_impacts(const SampledSignal& env, double rate_hint) {
  std::vector<double> impacts;
  const auto& v = env.samples;
  if (v.size() < 3 || !(rate_hint > 0.0) || env.sample_rate <= 0) return impacts;
  const double fs = env.sample_rate;
  const double refractory = kImpactRefractory / rate_hint;
  const double floor_level = quantile(v, 0.5);

  // Typical click height: median of the tallest peaks, as many as the hint
  // predicts for this length.
  auto candidates = pick_peaks(v, fs, floor_level, refractory);
  if (candidates.empty()) return impacts;
  std::vector<double> heights;
  heights.reserve(candidates.size());
  for (const auto& p : candidates) heights.push_back(p.level);
  std::sort(heights.begin(), heights.end(), std::greater<>());
  const auto expected = static_cast<std::size_t>(std::lround(rate_hint * env.duration()));
  heights.resize(std::clamp<std::size_t>(expected, 1, heights.size()));
  const double typical = heights[heights.size() / 2];

  const double threshold = floor_level + kImpactThreshold * (typical - floor_level);
  for (const auto& p : pick_peaks(v, fs, threshold, refractory)) impacts.push_back(p.time);
  return impacts;
}

double impact_count_rate(std::span<const double> impacts) {
  if (impacts.size() < 3) return std::numeric_limits<double>::quiet_NaN();
  const double spanned = impacts.back() - impacts.front();
  return spanned > 0.0 ? static_cast<double>(impacts.size() - 1) / spanned
                       : std::numeric_limits<double>::quiet_NaN();
}

TrimResult trim_transient(const SampledSignal& signal, RateBand band, const EnvelopeConfig& cfg) {
  signal.validate();
  const double duration = signal.duration();
  if (duration < kMinTrimInput) throw Error(ErrorCode::TooShort, "transient trimming needs at least 2 s");

  const SampledSignal env = envelope(signal, cfg);
  const int steps = static_cast<int>(std::lround(kMaxTrim / kTrimStep));
  std::vector<double> spectral(steps + 1);
  std::vector<double> counted(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double cut = i * kTrimStep * duration;
    const auto first = std::min(env.samples.size() - 1,
                                static_cast<std::size_t>(std::ceil(cut * env.sample_rate)));
    SampledSignal suffix{env.sample_rate,
                         std::vector<double>(env.samples.begin() + static_cast<std::ptrdiff_t>(first), env.samples.end())};
    remove_mean(suffix.samples);
    spectral[i] = estimate_rate(modulation_spectrum(suffix), band).rate_hz;
    counted[i] = impact_count_rate(detect_impacts(suffix, spectral[i]));
  }

  TrimResult out;
  out.suffix_rates = spectral;
  int chosen = steps;
  for (int i = 0; i + 2 <= steps; ++i) {
    if (agree(spectral[i], spectral[i + 1]) && agree(spectral[i + 1], spectral[i + 2]) &&
        agree(spectral[i], counted[i])) {
      chosen = i;
      out.stable = true;
      break;
    }
  }
  const auto first = std::min(signal.samples.size() - 1,
                              static_cast<std::size_t>(std::ceil(chosen * kTrimStep * duration * signal.sample_rate)));
  out.trimmed_seconds = static_cast<double>(first) / signal.sample_rate;
  out.signal.sample_rate = signal.sample_rate;
  out.signal.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(first), signal.samples.end());
  return out;
}

Measurement measurement_from_rate(const RateEstimate& rate, double pitch, double height) {
  if (!(pitch > 0.0)) throw Error(ErrorCode::InvalidParameter, "pitch must be positive");
  Measurement m;
  m.rate = rate;
  m.wave_speed_mps = rate.rate_hz * pitch;
  m.normalized_speed = normalize_speed(m.wave_speed_mps, height);
  return m;
}

Measurement wave_speed_from_recording(const SampledSignal& signal, double pitch, double height, RateBand band,
                                      const EnvelopeConfig& cfg) {
  if (!(pitch > 0.0)) throw Error(ErrorCode::InvalidParameter, "pitch must be positive");
  if (!(height > 0.0)) throw Error(ErrorCode::NonPositiveHeight, "height must be positive");
  const TrimResult trimmed = trim_transient(signal, band, cfg);
  RateEstimate rate = estimate_rate(modulation_spectrum(envelope(trimmed.signal, cfg)), band);
  rate.trimmed_seconds = trimmed.trimmed_seconds;
  rate.reliable = rate.reliable && trimmed.stable;
  return measurement_from_rate(rate, pitch, height);
}

std::string to_key_value(const Measurement& m) {
  std::ostringstream os;
  os.precision(6);
  os << "rate_hz=" << m.rate.rate_hz << '\n'
     << "snr_db=" << m.rate.snr_db << '\n'
     << "reliable=" << (m.rate.reliable ? "true" : "false") << '\n'
     << "trimmed_seconds=" << m.rate.trimmed_seconds << '\n'
     << "wave_speed_mps=" << m.wave_speed_mps << '\n'
     << "normalized_speed=" << m.normalized_speed << '\n';
  return os.str();
}

std::string to_json(const Measurement& m) {
  nlohmann::ordered_json j;
  j["rate_hz"] = m.rate.rate_hz;
  j["snr_db"] = m.rate.snr_db;
  j["reliable"] = m.rate.reliable;
  j["trimmed_seconds"] = m.rate.trimmed_seconds;
  j["wave_speed_mps"] = m.wave_speed_mps;
  j["normalized_speed"] = m.normalized_speed;
  return j.dump(2);
}

}  // namespace domino
