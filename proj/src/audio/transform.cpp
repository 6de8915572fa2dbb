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

#include <string>

#include "asrwb/audio/audio.hpp"
#include "asrwb/error.hpp"

namespace asrwb::audio {

AudioBuffer mixdown(const AudioBuffer& buffer) {
  if (buffer.channels < 1)
    throw Error(Errc::kInvalidArgument, "channel count must be positive");
  if (buffer.channels == 1) return buffer;

  const auto ch = static_cast<std::size_t>(buffer.channels);
  AudioBuffer out;
  out.sample_rate_hz = buffer.sample_rate_hz;
  out.channels = 1;
  out.samples.resize(buffer.frames());
  for (std::size_t f = 0; f < out.samples.size(); ++f) {
    double sum = 0.0;
    for (std::size_t c = 0; c < ch; ++c) sum += buffer.samples[f * ch + c];
    out.samples[f] = static_cast<float>(sum / static_cast<double>(ch));
  }
  return out;
}

std::size_t decimated_length(std::size_t input_length, int source_rate_hz,
                             int target_rate_hz) {
  // 128-bit intermediate: len * dst can exceed 64 bits for long captures at
  // exotic rates.
  const auto n = static_cast<unsigned __int128>(input_length) *
                 static_cast<unsigned>(target_rate_hz);
  return static_cast<std::size_t>(n / static_cast<unsigned>(source_rate_hz));
}

AudioBuffer resample_decimate(const AudioBuffer& buffer, int target_rate_hz) {
  if (buffer.channels != 1)
    throw Error(Errc::kInvalidArgument, "decimation expects mono input");
  if (target_rate_hz <= 0 || buffer.sample_rate_hz <= 0)
    throw Error(Errc::kInvalidArgument, "sample rates must be positive");
  if (target_rate_hz > buffer.sample_rate_hz)
    throw Error(Errc::kUpsampleUnsupported,
                "cannot raise " + std::to_string(buffer.sample_rate_hz) +
                    " Hz to " + std::to_string(target_rate_hz) + " Hz");
  if (target_rate_hz == buffer.sample_rate_hz) return buffer;

  const auto src = static_cast<std::uint64_t>(buffer.sample_rate_hz);
  const auto dst = static_cast<std::uint64_t>(target_rate_hz);
  AudioBuffer out;
  out.sample_rate_hz = target_rate_hz;
  out.channels = 1;
  out.samples.resize(decimated_length(buffer.samples.size(), buffer.sample_rate_hz,
                                      target_rate_hz));
  for (std::size_t j = 0; j < out.samples.size(); ++j)
    out.samples[j] = buffer.samples[static_cast<std::size_t>(j * src / dst)];
  return out;
}

AudioBuffer to_mono_16k(const AudioBuffer& buffer) {
  AudioBuffer mono = mixdown(buffer);
  if (mono.sample_rate_hz == kTargetRateHz) return mono;
  return resample_decimate(mono, kTargetRateHz);
}

}  // namespace asrwb::audio
