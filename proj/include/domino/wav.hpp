#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "domino/signal.hpp"

namespace domino {

/// Decodes a RIFF/WAVE PCM16 mono or stereo file (stereo is averaged).
/// Samples are scaled by 1/32768. Throws MalformedContainer,
/// UnsupportedEncoding or RateTooLow.
SampledSignal read_wav(std::span<const std::uint8_t> bytes);

/// Canonical 44-byte-header mono PCM16 encoding. In-range samples map to
/// round(x * 32768) saturated at 32767; samples beyond +-1 clamp to +-32767.
std::vector<std::uint8_t> write_wav(const SampledSignal& signal);

SampledSignal read_wav_file(const std::filesystem::path& path);
void write_wav_file(const std::filesystem::path& path, const SampledSignal& signal);

}  // namespace domino
