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
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "asrwb/net/features.hpp"
#include "asrwb/net/network.hpp"
#include "asrwb/net/viterbi.hpp"

namespace asrwb::net {

/// Everything the aligner and the recognize endpoint need at inference time.
struct Model {
  NetState net;
  FeatureConfig features;
  std::optional<HmmTopology> topology;
  std::optional<CoactPrior> prior;
  bool operator==(const Model&) const = default;
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Containers are CBOR maps tagged with {"format", "version"}; weights are
// row-major float64 arrays, so save/load is exact.
std::vector<std::uint8_t> encode_model(const Model& model);
Model decode_model(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_prior(const CoactPrior& prior);
CoactPrior decode_prior(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

inline Model load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }
inline void save_model(const std::filesystem::path& path, const Model& m) {
  write_file(path, encode_model(m));
}

}  // namespace asrwb::net
