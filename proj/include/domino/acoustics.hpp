#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "domino/signal.hpp"

namespace domino {

// Impact-rate measurement from a recording of a collapsing domino row.
//
// Each collision is a short broadband click, so the impact rate lives in the
// amplitude envelope rather than the carrier: band-pass, rectify, low-pass,
// then look for the dominant line in the envelope spectrum.

struct SynthesisParams {
  double click_duration = 0.005;  // [s]
  double click_decay = 600.0;     // exponential decay rate [1/s]
  double snr_db = std::numeric_limits<double>::infinity();
  std::uint64_t noise_seed = 1;
  /// Total length [s]; 0 means last impact + click + 0.1 s.
  double duration = 0.0;
};

/// Seeded noise bursts at the given times over a background at snr_db
/// (signal power measured over burst support), peak-normalised to 0.9.
/// Throws EmptyImpactList, InvalidParameter.
SampledSignal synthesize_collapse(std::span<const double> impact_times, const SynthesisParams& params,
                                  int sample_rate = 44100);

struct EnvelopeConfig {
  double band_lo_hz = 800.0;
  double band_hi_hz = 3800.0;
  int band_order = 4;
  double lowpass_hz = 250.0;
  int lowpass_order = 4;
  int output_rate = 2000;
};

/// Band-pass, full-wave rectify, low-pass (all zero-phase), resample to
/// cfg.output_rate, remove the mean. Throws TooShort below 0.5 s.
SampledSignal envelope(const SampledSignal& signal, const EnvelopeConfig& cfg = {});

struct EnvelopeSpectrum {
  std::vector<double> bin_frequencies;  // [Hz], uniform from 0
  std::vector<double> magnitudes;
  double resolution = 0.0;  // [Hz]
};

/// Hann-windowed magnitude spectrum zero-padded to the next power of two
/// at least four times the envelope length. Throws TooShort.
EnvelopeSpectrum modulation_spectrum(const SampledSignal& env);

struct RateBand {
  double lo_hz = 4.0;
  double hi_hz = 100.0;
};

struct RateEstimate {
  double rate_hz = 0.0;
  double snr_db = 0.0;
  bool reliable = false;
  double trimmed_seconds = 0.0;
};

inline constexpr double kReliableSnrDb = 6.0;

/// Dominant in-band line refined by parabolic interpolation. A lower
/// sub-harmonic peak within 80% of the maximum wins over its harmonic.
/// Throws BandOutOfRange.
RateEstimate estimate_rate(const EnvelopeSpectrum& spectrum, RateBand band = {});

/// Times [s] of click peaks in an envelope: local maxima at least 30% of the way
/// from the median level to the typical click height, with peaks closer
/// than 0.35 of the hinted period merged into the taller one. The hint only
/// sets the merge distance and how many peaks define "typical".
std::vector<double> detect_impacts(const SampledSignal& env, double rate_hint);

/// Mean rate implied by impact times, (n - 1) / (last - first); NaN when
/// fewer than three impacts are found.
double impact_count_rate(std::span<const double> impacts);

struct TrimResult {
  SampledSignal signal;  // suffix of the input
  double trimmed_seconds = 0.0;
  bool stable = false;
  std::vector<double> suffix_rates;  // spectral estimate at each trim step
};

inline constexpr double kTrimStep = 0.05;
inline constexpr double kMaxTrim = 0.5;
inline constexpr double kTrimAgreement = 0.02;

/// Drops 0%, 5%, ..., 50% of the recording and keeps the smallest trim at
/// which the spectral rate agrees with the next two trims and with the
/// suffix's counted impact rate, each within 2%. Falls back to 50% with
/// stable = false. Throws TooShort below 2 s.
TrimResult trim_transient(const SampledSignal& signal, RateBand band = {}, const EnvelopeConfig& cfg = {});

struct Measurement {
  double wave_speed_mps = 0.0;
  double normalized_speed = 0.0;
  RateEstimate rate;
};

/// Full pipeline: trim, envelope, spectrum, rate; V = rate * pitch.
Measurement wave_speed_from_recording(const SampledSignal& signal, double pitch, double height,
                                      RateBand band = {}, const EnvelopeConfig& cfg = {});

/// V = rate * pitch for an already-estimated rate.
Measurement measurement_from_rate(const RateEstimate& rate, double pitch, double height);

std::string to_key_value(const Measurement& m);
std::string to_json(const Measurement& m);

}  // namespace domino
