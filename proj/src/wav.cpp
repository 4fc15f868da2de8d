#include "domino/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "domino/error.hpp"

namespace domino {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
constexpr int kMinSampleRate = 8000;

std::uint16_t get_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedContainer, what); }

std::int16_t to_pcm16(double x) {
  if (x > 1.0) return 32767;
  if (x < -1.0) return -32767;
  const double scaled = std::round(x * 32768.0);  // half away from zero
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

}  // namespace

SampledSignal read_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    malformed("missing RIFF/WAVE header");
  }
  const std::size_t riff_end = std::min<std::size_t>(bytes.size(), std::size_t{8} + get_u32(bytes, 4));

  std::optional<Format> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= riff_end) {
    const std::uint32_t size = get_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) malformed("chunk runs past end of file");
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16) malformed("fmt chunk too small");
      Format f;
      f.tag = get_u16(bytes, body);
      f.channels = get_u16(bytes, body + 2);
      f.rate = get_u32(bytes, body + 4);
      f.block_align = get_u16(bytes, body + 12);
      f.bits = get_u16(bytes, body + 14);
      if (f.tag == kFormatExtensible && size >= 26) {
        f.tag = get_u16(bytes, body + 24);  // first two bytes of the sub-format GUID
      }
      fmt = f;
    } else if (tag_is(bytes, pos, "data")) {
      data = bytes.subspan(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!fmt) malformed("no fmt chunk");
  if (!have_data) malformed("no data chunk");

  if (fmt->tag != kFormatPcm) {
    throw Error(ErrorCode::UnsupportedEncoding, "only PCM encoding is supported, got format tag " +
                                                    std::to_string(fmt->tag));
  }
  if (fmt->bits != 16) {
    throw Error(ErrorCode::UnsupportedEncoding,
                "only 16-bit samples are supported, got " + std::to_string(fmt->bits) + "-bit");
  }
  if (fmt->channels != 1 && fmt->channels != 2) {
    throw Error(ErrorCode::UnsupportedEncoding,
                "only mono or stereo is supported, got " + std::to_string(fmt->channels) + " channels");
  }
  if (fmt->block_align != 2 * fmt->channels) malformed("block alignment does not match channel count");
  if (fmt->rate < static_cast<std::uint32_t>(kMinSampleRate)) {
    throw Error(ErrorCode::RateTooLow, "sample rate " + std::to_string(fmt->rate) + " Hz is below 8000 Hz");
  }

  SampledSignal out;
  out.sample_rate = static_cast<int>(fmt->rate);
  const std::size_t frames = data.size() / fmt->block_align;
  out.samples.reserve(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t at = i * fmt->block_align;
    if (fmt->channels == 1) {
      out.samples.push_back(static_cast<std::int16_t>(get_u16(data, at)) / 32768.0);
    } else {
      const double left = static_cast<std::int16_t>(get_u16(data, at));
      const double right = static_cast<std::int16_t>(get_u16(data, at + 2));
      out.samples.push_back(0.5 * (left + right) / 32768.0);
    }
  }
  return out;
}

std::vector<std::uint8_t> write_wav(const SampledSignal& signal) {
  const auto data_bytes = static_cast<std::uint32_t>(signal.samples.size() * 2);
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);         // channels
  put_u32(out, rate);
  put_u32(out, rate * 2);  // byte rate
  put_u16(out, 2);         // block align
  put_u16(out, 16);        // bits per sample
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double x : signal.samples) put_u16(out, static_cast<std::uint16_t>(to_pcm16(x)));
  return out;
}

SampledSignal read_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return read_wav(bytes);
}

void write_wav_file(const std::filesystem::path& path, const SampledSignal& signal) {
  const auto bytes = write_wav(signal);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace domino
