#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "domino/error.hpp"
#include "domino/geometry.hpp"

using namespace domino;

namespace {

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

TEST_CASE("unit-height array at d/H = 0.5") {
  const auto spec = make_array_spec({1.0, 0.0, 0.5, 1.0}, 0.5, 10);
  CHECK(spec.pitch() == 0.5);
  CHECK(spec.spacing_ratio() == 0.5);
  CHECK(spec.contact_angle() == doctest::Approx(std::numbers::pi / 6).epsilon(1e-15));
  CHECK(spec.contact_height() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("table spacing 0.23 in absolute units") {
  const auto spec = make_array_spec({0.05, 0.0075, 0.024, 0.01}, 0.0115, 20);
  CHECK(spec.pitch() == doctest::Approx(0.019).epsilon(1e-14));
  CHECK(spec.spacing_ratio() == doctest::Approx(0.23).epsilon(1e-14));
}

TEST_CASE("construction errors") {
  CHECK(code_of([] { make_array_spec({1.0, 0.0, 0.5, 1.0}, 1.1, 10); }) == ErrorCode::OverlappingSpacing);
  CHECK(code_of([] { make_array_spec({1.0, 0.0, 0.5, 1.0}, 1.0, 10); }) == ErrorCode::OverlappingSpacing);
  CHECK(code_of([] { make_array_spec({1.0, 0.0, 0.5, 1.0}, 0.0, 10); }) == ErrorCode::InvalidGap);
  CHECK(code_of([] { make_array_spec({1.0, 0.0, 0.5, 1.0}, -0.1, 10); }) == ErrorCode::InvalidGap);
  CHECK(code_of([] { make_array_spec({0.0, 0.0, 0.5, 1.0}, 0.1, 10); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { make_array_spec({1.0, -0.1, 0.5, 1.0}, 0.1, 10); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { make_array_spec({1.0, 1.0, 0.5, 1.0}, 0.1, 10); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { make_array_spec({1.0, 0.1, 0.0, 1.0}, 0.1, 10); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { make_array_spec({1.0, 0.1, 0.5, 0.0}, 0.1, 10); }) == ErrorCode::InvalidGeometry);
  CHECK(code_of([] { make_array_spec({1.0, 0.1, 0.5, 1.0}, 0.1, 1); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("spacing regime") {
  CHECK(spacing_regime(0.82) == SpacingRegime::Propagating);
  CHECK(spacing_regime(0.87) == SpacingRegime::BeyondPracticalLimit);
  CHECK(spacing_regime(std::sqrt(3.0) / 2.0) == SpacingRegime::Propagating);
  CHECK(spacing_regime(std::nextafter(std::sqrt(3.0) / 2.0, 1.0)) == SpacingRegime::BeyondPracticalLimit);
  CHECK(spacing_regime(1.0) == SpacingRegime::Overlapping);
  CHECK(spacing_regime(make_ratio_array(0.87, 0.1)) == SpacingRegime::BeyondPracticalLimit);
}

TEST_CASE("spacing regime is monotone in the ratio") {
  bool seen_beyond = false;
  for (int i = 1; i < 1000; ++i) {
    const auto regime = spacing_regime(i / 1000.0);
    if (regime != SpacingRegime::Propagating) seen_beyond = true;
    if (seen_beyond) CHECK(regime != SpacingRegime::Propagating);
  }
}

TEST_CASE("normalize_speed") {
  CHECK(normalize_speed(0.0, 0.37) == 0.0);
  CHECK(normalize_speed(1.0, 0.05) == doctest::Approx(1.0 / std::sqrt(0.4903325)).epsilon(1e-14));
  CHECK(normalize_speed(1.0, 0.05) == doctest::Approx(1.4281).epsilon(1e-4));
  CHECK(code_of([] { normalize_speed(1.0, 0.0); }) == ErrorCode::NonPositiveHeight);
  CHECK(code_of([] { denormalize_speed(1.0, -1.0); }) == ErrorCode::NonPositiveHeight);
}

TEST_CASE("property: derived geometry and normalization over random arrays") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> height(0.01, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double h = height(rng);
    const double t = 0.4 * h * unit(rng);
    const double d = h * (0.001 + 0.998 * unit(rng));
    const auto spec = make_array_spec({h, t, 0.5 * h, 0.02}, d, 2 + trial % 50);
    CHECK(spec.pitch() == spec.gap() + spec.thickness());
    const double hc = spec.contact_height();
    CHECK(std::abs(hc * hc + d * d - h * h) <= 1e-12 * h * h);
    CHECK(hc == doctest::Approx(h * std::cos(spec.contact_angle())).epsilon(1e-9));

    const double v = 3.0 * unit(rng);
    const double k = 0.1 + 10.0 * unit(rng);
    CHECK(normalize_speed(k * v, h) == doctest::Approx(k * normalize_speed(v, h)).epsilon(1e-14));
    if (v > 0.0) {
      CHECK(std::abs(denormalize_speed(normalize_speed(v, h), h) - v) <= 1e-12 * v);
    }
  }
}
