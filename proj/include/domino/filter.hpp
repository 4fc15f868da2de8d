#pragma once

#include <span>
#include <vector>

namespace domino {

/// Normalised second-order section, a0 == 1.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  /// Gain at DC, H(z = 1).
  double dc_gain() const noexcept { return (b0 + b1 + b2) / (1.0 + a1 + a2); }
};

using BiquadCascade = std::vector<Biquad>;

/// Even-order Butterworth low/high-pass as a cascade of order/2 sections,
/// bilinear transform with the corner pre-warped.
BiquadCascade butterworth_lowpass(int order, double corner_hz, double sample_rate);
BiquadCascade butterworth_highpass(int order, double corner_hz, double sample_rate);

/// Causal filtering; each section starts in the steady state for a constant
/// input equal to the first sample.
void filter_in_place(const BiquadCascade& cascade, std::span<double> x);

/// Forward then time-reversed pass: zero phase, squared magnitude response.
void filtfilt_in_place(const BiquadCascade& cascade, std::span<double> x);

/// |H(f)| of the cascade for a single (causal) pass.
double magnitude_response(const BiquadCascade& cascade, double freq_hz, double sample_rate);

}  // namespace domino
