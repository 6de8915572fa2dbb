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

#pragma once

#include <cstddef>
#include <vector>

#include "asrwb/audio/audio.hpp"

namespace asrwb::vad {

struct VadConfig {
  std::size_t window_size_samples = 400;  // 25 ms at 16 kHz
  float threshold = 0.05f;
  std::size_t hangover_windows = 4;

  /// Throws Error(kInvalidArgument) unless window >= 1 and 0 < threshold < 1.
  void validate() const;
};

/// Half-open sample range [start, end).
struct SpeechSegment {
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;

  std::size_t length() const { return end_sample - start_sample; }
  bool operator==(const SpeechSegment&) const = default;
};

/// max |sample| per window; the trailing partial window is included as-is.
/// Throws Error(kEmptyInput) for an empty buffer.
std::vector<float> window_peaks(const audio::AudioBuffer& buffer,
                                std::size_t window_size);

/// A window is speech iff its peak is strictly above the threshold. Runs of
/// speech windows are extended by `hangover_windows` trailing windows and
/// merged where they touch.
std::vector<SpeechSegment> detect_segments(const audio::AudioBuffer& buffer,
                                           const VadConfig& cfg);

/// Concatenation of the segment spans, in order.
/// Throws Error(kSegmentOutOfRange) for unsorted, overlapping, empty or
/// out-of-bounds segments.
audio::AudioBuffer gate_audio(const audio::AudioBuffer& buffer,
                              const std::vector<SpeechSegment>& segments);

std::size_t total_length(const std::vector<SpeechSegment>& segments);

}  // namespace asrwb::vad
