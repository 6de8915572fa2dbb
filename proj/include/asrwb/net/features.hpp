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

#include "asrwb/audio/audio.hpp"
#include "asrwb/net/matrix.hpp"

namespace asrwb::net {

struct FeatureConfig {
  std::size_t window_samples = 400;
  std::size_t shift_samples = 160;
  std::size_t num_bands = 24;
  double log_floor = 1e-10;
  bool operator==(const FeatureConfig&) const = default;
};

/// T x B log band energies.
struct FeatureMatrix {
  Matrix frames;
  std::size_t frame_shift_samples = 0;
  std::size_t window_samples = 0;
};

/// 1 + floor((n - window) / shift), or 0 when n < window.
std::size_t frame_count(std::size_t num_samples, std::size_t window, std::size_t shift);

/// Centre frequency in Hz of each triangular band (mel-spaced over 0..8 kHz).
Vector band_centers_hz(const FeatureConfig& cfg);

/// Hamming-windowed frames, DFT power spectrum, mel-spaced triangular bands,
/// then log(max(energy, floor)). Input must be mono 16 kHz.
/// Throws Error(kTooShort) when there are fewer samples than one window.
FeatureMatrix extract_features(const audio::AudioBuffer& buffer,
                               const FeatureConfig& cfg = {});

}  // namespace asrwb::net
