#include "domino/signal.hpp"

#include <cmath>
#include <string>

#include "domino/error.hpp"

namespace domino {

void SampledSignal::validate() const {
  if (sample_rate <= 0) throw Error(ErrorCode::InvalidSignal, "sample rate must be positive");
  if (samples.empty()) throw Error(ErrorCode::InvalidSignal, "signal has no samples");
  for (double x : samples) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidSignal, "signal contains non-finite samples");
  }
}

void SampledSignal::validate_recording() const {
  validate();
  if (sample_rate < 8000) {
    throw Error(ErrorCode::RateTooLow, "sample rate " + std::to_string(sample_rate) + " Hz is below 8000 Hz");
  }
  for (double x : samples) {
    if (x < -1.0 || x > 1.0) throw Error(ErrorCode::InvalidSignal, "recording samples must lie in [-1, 1]");
  }
}

}  // namespace domino
