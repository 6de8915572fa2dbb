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

#include <string>
#include <vector>

#include "asrwb/g2p/g2p.hpp"
#include "asrwb/net/matrix.hpp"

namespace asrwb::net {

/// State 0 is silence; phone p owns states 1 + 3p (rising), 2 + 3p (stable)
/// and 3 + 3p (falling).
struct HmmTopology {
  static constexpr std::size_t kStatesPerPhone = 3;
  static constexpr std::size_t kSilenceStates = 1;
  static constexpr int kSilenceState = 0;

  std::vector<std::string> phones;

  std::size_t total_states() const { return kSilenceStates + kStatesPerPhone * phones.size(); }
  int phone_state(std::size_t phone_index, std::size_t sub_state) const {
    return static_cast<int>(kSilenceStates + kStatesPerPhone * phone_index + sub_state);
  }
  /// Throws Error(kNotFound) for a phone outside the topology.
  std::size_t phone_index(std::string_view phone) const;
  /// "sil" for silence, otherwise the phone symbol.
  const std::string& state_phone(int state) const;

  /// Every phone g2p can produce, in inventory order.
  static HmmTopology from_inventory();
  bool operator==(const HmmTopology&) const = default;
};

struct AlignOptions {
  bool leading_silence = true;
  bool trailing_silence = true;
};

struct AlignmentResult {
  std::vector<int> state_ids;  // one per frame
  double log_score = 0.0;
};

/// Optional silence, three states per phone, optional silence.
std::vector<int> expand_chain(const g2p::PhoneSeq& phones, const HmmTopology& topology,
                              const AlignOptions& opts = {});

/// Best path through `chain` that starts at its first state, ends at its last
/// and at each frame either stays or advances by one. Score is the sum of
/// log_posteriors(t, chain[j]). Ties prefer advancing.
/// Throws Error(kTooFewFrames) when T < chain length.
AlignmentResult viterbi_chain(const Matrix& log_posteriors, const std::vector<int>& chain);

inline constexpr double kLogFloor = 1e-300;

/// Logs the posteriors (floored) and aligns them to the expanded chain.
AlignmentResult viterbi_align(const Matrix& posteriors, const g2p::PhoneSeq& phones,
                              const HmmTopology& topology, const AlignOptions& opts = {});

}  // namespace asrwb::net
