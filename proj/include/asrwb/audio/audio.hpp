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

#include <cstdint>
#include <span>
#include <vector>

namespace asrwb::audio {

inline constexpr int kTargetRateHz = 16000;

/// Interleaved samples in [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate_hz = kTargetRateHz;
  int channels = 1;

  std::size_t frames() const {
    return channels > 0 ? samples.size() / static_cast<std::size_t>(channels) : 0;
  }
  bool operator==(const AudioBuffer&) const = default;
};

enum class Encoding { kPcm16 };

struct WavInfo {
  Encoding encoding = Encoding::kPcm16;
  int sample_rate_hz = 0;
  int channels = 0;
  std::uint32_t data_byte_length = 0;
};

/// Header fields only; the same validation as parse_wav.
WavInfo probe_wav(std::span<const std::uint8_t> bytes);

/// RIFF/WAVE with a 16-bit PCM data chunk. Samples are value / 32768.
/// Throws Error: kMalformedContainer, kUnsupportedEncoding.
AudioBuffer parse_wav(std::span<const std::uint8_t> bytes);

/// PCM16 little-endian, canonical 44-byte header. Encoding is
/// clamp(round(sample * 32768), -32768, 32767), so every value produced by
/// parse_wav survives a write/parse cycle exactly.
std::vector<std::uint8_t> write_wav(const AudioBuffer& buffer);

std::int16_t quantize_sample(float sample);

/// Per-frame arithmetic mean of the channels.
AudioBuffer mixdown(const AudioBuffer& buffer);

/// Sample omission without filtering: out[j] = in[floor(j * src / dst)],
/// out length floor(len * dst / src). Mono input only.
/// Throws Error: kUpsampleUnsupported when target exceeds the source rate.
AudioBuffer resample_decimate(const AudioBuffer& buffer, int target_rate_hz);

std::size_t decimated_length(std::size_t input_length, int source_rate_hz,
                             int target_rate_hz);

/// mixdown followed by decimation to 16 kHz; no-ops are skipped.
AudioBuffer to_mono_16k(const AudioBuffer& buffer);

}  // namespace asrwb::audio
