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

#include "asrwb/vad/vad.hpp"

#include <algorithm>
#include <span>
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/simd/kernels.hpp"

namespace asrwb::vad {
namespace {

void require_mono_nonempty(const audio::AudioBuffer& buffer) {
  if (buffer.channels != 1)
    throw Error(Errc::kInvalidArgument, "VAD expects mono audio");
  if (buffer.samples.empty()) throw Error(Errc::kEmptyInput, "empty audio buffer");
}

}  // namespace

void VadConfig::validate() const {
  if (window_size_samples < 1)
    throw Error(Errc::kInvalidArgument, "VAD window must be at least 1 sample");
  if (!(threshold > 0.0f && threshold < 1.0f))
    throw Error(Errc::kInvalidArgument, "VAD threshold must lie in (0, 1)");
}

std::vector<float> window_peaks(const audio::AudioBuffer& buffer,
                                std::size_t window_size) {
  require_mono_nonempty(buffer);
  if (window_size < 1)
    throw Error(Errc::kInvalidArgument, "VAD window must be at least 1 sample");

  const std::span<const float> all(buffer.samples);
  const std::size_t n = all.size();
  std::vector<float> peaks;
  peaks.reserve((n + window_size - 1) / window_size);
  for (std::size_t at = 0; at < n; at += window_size)
    peaks.push_back(simd::abs_max(all.subspan(at, std::min(window_size, n - at))));
  return peaks;
}

std::vector<SpeechSegment> detect_segments(const audio::AudioBuffer& buffer,
                                           const VadConfig& cfg) {
  cfg.validate();
  const std::vector<float> peaks = window_peaks(buffer, cfg.window_size_samples);
  const std::size_t n = buffer.samples.size();
  const std::size_t w = cfg.window_size_samples;
  const std::size_t num_windows = peaks.size();

  std::vector<SpeechSegment> out;
  std::size_t i = 0;
  while (i < num_windows) {
    if (!(peaks[i] > cfg.threshold)) {
      ++i;
      continue;
    }
    std::size_t run_end = i;  // exclusive, in windows
    while (run_end < num_windows && peaks[run_end] > cfg.threshold) ++run_end;
    const std::size_t extended = std::min(num_windows, run_end + cfg.hangover_windows);
    const SpeechSegment seg{i * w, std::min(extended * w, n)};
    if (!out.empty() && out.back().end_sample >= seg.start_sample)
      out.back().end_sample = std::max(out.back().end_sample, seg.end_sample);
    else
      out.push_back(seg);
    i = run_end;
  }
  return out;
}

audio::AudioBuffer gate_audio(const audio::AudioBuffer& buffer,
                              const std::vector<SpeechSegment>& segments) {
  if (buffer.channels != 1)
    throw Error(Errc::kInvalidArgument, "gating expects mono audio");
  const std::size_t n = buffer.samples.size();
  std::size_t prev_end = 0;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const auto& s = segments[k];
    if (s.start_sample >= s.end_sample || s.end_sample > n ||
        (k > 0 && s.start_sample < prev_end))
      throw Error(Errc::kSegmentOutOfRange,
                  "segment " + std::to_string(k) + " [" +
                      std::to_string(s.start_sample) + ", " +
                      std::to_string(s.end_sample) + ") invalid for " +
                      std::to_string(n) + " samples");
    prev_end = s.end_sample;
  }

  audio::AudioBuffer out;
  out.sample_rate_hz = buffer.sample_rate_hz;
  out.channels = 1;
  out.samples.reserve(total_length(segments));
  for (const auto& s : segments)
    out.samples.insert(out.samples.end(), buffer.samples.begin() + s.start_sample,
                       buffer.samples.begin() + s.end_sample);
  return out;
}

std::size_t total_length(const std::vector<SpeechSegment>& segments) {
  std::size_t total = 0;
  for (const auto& s : segments) total += s.length();
  return total;
}

}  // namespace asrwb::vad
