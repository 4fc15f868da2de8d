#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "domino/error.hpp"
#include "domino/wav.hpp"

using namespace domino;

namespace {

void u16(std::vector<std::uint8_t>& b, unsigned v) {
  b.push_back(v & 0xFF);
  b.push_back((v >> 8) & 0xFF);
}
void u32(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) b.push_back((v >> s) & 0xFF);
}
void tag(std::vector<std::uint8_t>& b, const char* t) { b.insert(b.end(), t, t + 4); }

// Hand-assembled PCM file with optional extra chunk before the data.
std::vector<std::uint8_t> make_wav(unsigned format, unsigned channels, std::uint32_t rate, unsigned bits,
                                   const std::vector<std::int16_t>& samples, bool extra_chunk = false) {
  std::vector<std::uint8_t> body;
  tag(body, "WAVE");
  tag(body, "fmt ");
  u32(body, 16);
  u16(body, format);
  u16(body, channels);
  u32(body, rate);
  u32(body, rate * channels * bits / 8);
  u16(body, channels * bits / 8);
  u16(body, bits);
  if (extra_chunk) {
    tag(body, "LIST");
    u32(body, 3);
    body.insert(body.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
  }
  tag(body, "data");
  u32(body, static_cast<std::uint32_t>(samples.size() * 2));
  for (auto s : samples) u16(body, static_cast<std::uint16_t>(s));
  std::vector<std::uint8_t> out;
  tag(out, "RIFF");
  u32(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected domino::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("one second of silence") {
  const auto sig = read_wav(make_wav(1, 1, 44100, 16, std::vector<std::int16_t>(44100, 0)));
  CHECK(sig.sample_rate == 44100);
  REQUIRE(sig.samples.size() == 44100);
  for (double x : sig.samples) CHECK(x == 0.0);
  CHECK(write_wav(sig) == make_wav(1, 1, 44100, 16, std::vector<std::int16_t>(44100, 0)));
}

TEST_CASE("property: canonical mono files round-trip byte for byte") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> sample(-32768, 32767);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int16_t> pcm(1 + trial * 97);
    for (auto& s : pcm) s = static_cast<std::int16_t>(sample(rng));
    pcm[0] = trial % 2 ? -32768 : 32767;
    const auto bytes = make_wav(1, 1, 8000 + 1000 * trial, 16, pcm);
    const auto sig = read_wav(bytes);
    for (double x : sig.samples) CHECK((x >= -1.0 && x < 1.0));
    CHECK(write_wav(sig) == bytes);
  }
}

TEST_CASE("stereo is averaged and foreign chunks are skipped") {
  const auto sig = read_wav(make_wav(1, 2, 22050, 16, {1000, 3000, -200, -400}, true));
  REQUIRE(sig.samples.size() == 2);
  CHECK(sig.samples[0] == doctest::Approx(2000.0 / 32768.0));
  CHECK(sig.samples[1] == doctest::Approx(-300.0 / 32768.0));
}

TEST_CASE("writer clamps and rounds half away from zero") {
  const SampledSignal sig{8000, {1.0 + 1e-9, -1.0 - 1e-9, 1.0, -1.0, 0.5 / 32768.0, -0.5 / 32768.0, 0.25 / 32768.0}};
  const auto bytes = write_wav(sig);
  REQUIRE(bytes.size() == 44 + 2 * sig.samples.size());
  auto at = [&](std::size_t i) {
    return static_cast<std::int16_t>(bytes[44 + 2 * i] | (bytes[45 + 2 * i] << 8));
  };
  CHECK(at(0) == 32767);
  CHECK(at(1) == -32767);
  CHECK(at(2) == 32767);
  CHECK(at(3) == -32768);
  CHECK(at(4) == 1);
  CHECK(at(5) == -1);
  CHECK(at(6) == 0);
}

TEST_CASE("canonical header layout") {
  const auto bytes = write_wav({16000, {0.0, 0.0, 0.0}});
  REQUIRE(bytes.size() == 50);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RIFF");
  CHECK(bytes[4] == 42);
  CHECK(std::string(bytes.begin() + 8, bytes.begin() + 16) == "WAVEfmt ");
  CHECK(bytes[16] == 16);
  CHECK(bytes[20] == 1);   // PCM
  CHECK(bytes[22] == 1);   // mono
  CHECK((bytes[24] | (bytes[25] << 8)) == 16000);
  CHECK((bytes[28] | (bytes[29] << 8)) == 32000);
  CHECK(bytes[32] == 2);
  CHECK(bytes[34] == 16);
  CHECK(std::string(bytes.begin() + 36, bytes.begin() + 40) == "data");
  CHECK(bytes[40] == 6);
}

TEST_CASE("decoder errors") {
  CHECK(code_of([] { read_wav(make_wav(1, 1, 44100, 8, {0, 0})); }) == ErrorCode::UnsupportedEncoding);
  CHECK(code_of([] { read_wav(make_wav(3, 1, 44100, 16, {0, 0})); }) == ErrorCode::UnsupportedEncoding);
  CHECK(code_of([] { read_wav(make_wav(1, 3, 44100, 16, {0, 0, 0})); }) == ErrorCode::UnsupportedEncoding);
  CHECK(code_of([] { read_wav(make_wav(1, 1, 4000, 16, {0, 0})); }) == ErrorCode::RateTooLow);

  auto truncated = make_wav(1, 1, 44100, 16, {1, 2, 3, 4});
  truncated.resize(truncated.size() - 4);
  CHECK(code_of([&] { read_wav(truncated); }) == ErrorCode::MalformedContainer);
  std::vector<std::uint8_t> junk{'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
  CHECK(code_of([&] { read_wav(junk); }) == ErrorCode::MalformedContainer);
  CHECK(code_of([] { read_wav(std::vector<std::uint8_t>{}); }) == ErrorCode::MalformedContainer);
}
