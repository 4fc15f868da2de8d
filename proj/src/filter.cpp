#include "domino/filter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "domino/error.hpp"

namespace domino {

namespace {

enum class Kind { Lowpass, Highpass };

BiquadCascade butterworth(Kind kind, int order, double corner_hz, double sample_rate) {
  if (order < 2 || order % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "Butterworth order must be even and >= 2");
  }
  if (!(corner_hz > 0.0) || !(corner_hz < 0.5 * sample_rate)) {
    throw Error(ErrorCode::InvalidParameter, "filter corner must lie strictly inside (0, Nyquist)");
  }
  const double w0 = 2.0 * std::numbers::pi * corner_hz / sample_rate;
  const double cosw = std::cos(w0);
  const double sinw = std::sin(w0);

  BiquadCascade cascade;
  for (int k = 0; k < order / 2; ++k) {
    // Pole pair k of the analog prototype sets the section Q.
    const double q = 1.0 / (2.0 * std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order)));
    const double alpha = sinw / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    if (kind == Kind::Lowpass) {
      s.b0 = (1.0 - cosw) / 2.0 / a0;
      s.b1 = (1.0 - cosw) / a0;
      s.b2 = s.b0;
    } else {
      s.b0 = (1.0 + cosw) / 2.0 / a0;
      s.b1 = -(1.0 + cosw) / a0;
      s.b2 = s.b0;
    }
    s.a1 = -2.0 * cosw / a0;
    s.a2 = (1.0 - alpha) / a0;
    cascade.push_back(s);
  }
  return cascade;
}

void run_section(const Biquad& s, std::span<double> x) {
  if (x.empty()) return;
  // Transposed direct form II, initialised at the constant-input steady state.
  const double u = x[0];
  const double y_ss = s.dc_gain() * u;
  double z2 = s.b2 * u - s.a2 * y_ss;
  double z1 = s.b1 * u - s.a1 * y_ss + z2;
  for (double& v : x) {
    const double in = v;
    const double out = s.b0 * in + z1;
    z1 = s.b1 * in - s.a1 * out + z2;
    z2 = s.b2 * in - s.a2 * out;
    v = out;
  }
}

}  // namespace

BiquadCascade butterworth_lowpass(int order, double corner_hz, double sample_rate) {
  return butterworth(Kind::Lowpass, order, corner_hz, sample_rate);
}

BiquadCascade butterworth_highpass(int order, double corner_hz, double sample_rate) {
  return butterworth(Kind::Highpass, order, corner_hz, sample_rate);
}

void filter_in_place(const BiquadCascade& cascade, std::span<double> x) {
  for (const auto& s : cascade) run_section(s, x);
}

void filtfilt_in_place(const BiquadCascade& cascade, std::span<double> x) {
  filter_in_place(cascade, x);
  std::reverse(x.begin(), x.end());
  filter_in_place(cascade, x);
  std::reverse(x.begin(), x.end());
}

double magnitude_response(const BiquadCascade& cascade, double freq_hz, double sample_rate) {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  double mag = 1.0;
  for (const auto& s : cascade) {
    mag *= std::abs((s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2));
  }
  return mag;
}

}  // namespace domino
