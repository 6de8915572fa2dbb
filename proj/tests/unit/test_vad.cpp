// Copyright (c) 2026 The asrwb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "asrwb/error.hpp"
#include "asrwb/vad/vad.hpp"
#include "oracles/oracles.hpp"

using namespace asrwb;

namespace {

audio::AudioBuffer mono(std::vector<float> s) {
  audio::AudioBuffer b;
  b.samples = std::move(s);
  return b;
}

vad::VadConfig config(std::size_t w, float thr, std::size_t hang) {
  vad::VadConfig c;
  c.window_size_samples = w;
  c.threshold = thr;
  c.hangover_windows = hang;
  return c;
}

}  // namespace

TEST_CASE("window_peaks includes the trailing partial window") {
  const auto peaks = vad::window_peaks(mono({0.1f, -0.2f, 0.0f, 0.3f, -0.9f}), 2);
  CHECK(peaks == std::vector<float>{0.2f, 0.3f, 0.9f});
}

TEST_CASE("detect_segments: threshold is strict, hangover extends and clips") {
  auto b = mono(std::vector<float>(10, 0.0f));
  b.samples[2] = 0.5f;
  CHECK(vad::detect_segments(b, config(2, 0.5f, 0)).empty());  // equal is not above
  b.samples[2] = 0.51f;
  const auto one = vad::detect_segments(b, config(2, 0.5f, 1));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == vad::SpeechSegment{2, 6});
  const auto clipped = vad::detect_segments(b, config(2, 0.5f, 10));
  CHECK(clipped == std::vector<vad::SpeechSegment>{{2, 10}});
}

TEST_CASE("detect_segments merges runs bridged by hangover") {
  auto b = mono(std::vector<float>(12, 0.0f));
  b.samples[0] = 1.0f;
  b.samples[6] = 1.0f;
  CHECK(vad::detect_segments(b, config(2, 0.5f, 0)).size() == 2);
  CHECK(vad::detect_segments(b, config(2, 0.5f, 2)) == std::vector<vad::SpeechSegment>{{0, 12}});
}

TEST_CASE("silence yields no segments; empty input is an error") {
  CHECK(vad::detect_segments(mono(std::vector<float>(1000, 0.01f)), {}).empty());
  try {
    vad::detect_segments(mono({}), {});
    FAIL("empty input accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kEmptyInput);
  }
}

TEST_CASE("VadConfig::validate") {
  CHECK_THROWS_AS(config(0, 0.1f, 0).validate(), Error);
  CHECK_THROWS_AS(config(10, 0.0f, 0).validate(), Error);
  CHECK_THROWS_AS(config(10, 1.0f, 0).validate(), Error);
  CHECK_NOTHROW(config(1, 0.5f, 0).validate());
}

TEST_CASE("detect_segments agrees with the sample-level reference") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 3000;
    std::vector<float> x(n);
    std::uniform_real_distribution<float> u(-1.0f, 1.0f);
    const float scale = std::uniform_real_distribution<float>(0.0f, 0.3f)(rng);
    for (float& v : x) v = u(rng) * ((rng() % 8 == 0) ? 1.0f : scale);
    const std::size_t w = 1 + rng() % 300, hang = rng() % 5;
    const float thr = std::uniform_real_distribution<float>(0.05f, 0.95f)(rng);
    const auto got = vad::detect_segments(mono(x), config(w, thr, hang));
    const auto want = oracle::vad_reference(x, w, thr, hang);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].start_sample == want[i].start);
      CHECK(got[i].end_sample == want[i].end);
    }
  }
}

TEST_CASE("gate_audio concatenates segments and validates them") {
  const auto b = mono({0, 1, 2, 3, 4, 5, 6, 7});
  const auto g = vad::gate_audio(b, {{1, 3}, {5, 7}});
  CHECK(g.samples == std::vector<float>{1, 2, 5, 6});
  CHECK(g.sample_rate_hz == b.sample_rate_hz);
  CHECK(vad::total_length({{1, 3}, {5, 7}}) == 4);
  for (const auto& bad : std::vector<std::vector<vad::SpeechSegment>>{
           {{3, 2}}, {{0, 9}}, {{4, 6}, {1, 3}}, {{1, 4}, {3, 6}}, {{2, 2}}}) {
    try {
      vad::gate_audio(b, bad);
      FAIL("bad segments accepted");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::kSegmentOutOfRange);
    }
  }
}
