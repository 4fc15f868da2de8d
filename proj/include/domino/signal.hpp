#pragma once

#include <vector>

namespace domino {

/// Uniformly sampled mono signal.
struct SampledSignal {
  int sample_rate = 0;  // [Hz]
  std::vector<double> samples;

  double duration() const noexcept {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }

  /// Non-empty, positive rate, all samples finite. Throws InvalidSignal.
  void validate() const;
  /// validate() plus rate >= 8000 Hz (RateTooLow) and samples in [-1, 1].
  void validate_recording() const;
};

}  // namespace domino
