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

#include "asrwb/net/viterbi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "asrwb/error.hpp"

namespace asrwb::net {

std::size_t HmmTopology::phone_index(std::string_view phone) const {
  const auto it = std::find(phones.begin(), phones.end(), phone);
  if (it == phones.end())
    throw Error(Errc::kNotFound, "phone '" + std::string(phone) + "' is not in the topology");
  return static_cast<std::size_t>(it - phones.begin());
}

const std::string& HmmTopology::state_phone(int state) const {
  static const std::string kSil = "sil";
  if (state < static_cast<int>(kSilenceStates)) return kSil;
  return phones.at((static_cast<std::size_t>(state) - kSilenceStates) / kStatesPerPhone);
}

HmmTopology HmmTopology::from_inventory() {
  const auto& inv = g2p::G2pTables::bundled().inventory();
  return HmmTopology{std::vector<std::string>(inv.begin(), inv.end())};
}

std::vector<int> expand_chain(const g2p::PhoneSeq& phones, const HmmTopology& topology,
                              const AlignOptions& opts) {
  std::vector<int> chain;
  if (opts.leading_silence) chain.push_back(HmmTopology::kSilenceState);
  for (const auto& p : phones) {
    const std::size_t idx = topology.phone_index(p);
    for (std::size_t k = 0; k < HmmTopology::kStatesPerPhone; ++k)
      chain.push_back(topology.phone_state(idx, k));
  }
  if (opts.trailing_silence) chain.push_back(HmmTopology::kSilenceState);
  return chain;
}

AlignmentResult viterbi_chain(const Matrix& log_posteriors, const std::vector<int>& chain) {
  const std::size_t T = log_posteriors.rows();
  const std::size_t S = chain.size();
  if (S == 0) throw Error(Errc::kInvalidArgument, "empty state chain");
  if (T < S)
    throw Error(Errc::kTooFewFrames, std::to_string(T) + " frames cannot cover a chain of " +
                                         std::to_string(S) + " states");
  for (int s : chain)
    if (s < 0 || static_cast<std::size_t>(s) >= log_posteriors.cols())
      throw Error(Errc::kShapeMismatch, "chain state " + std::to_string(s) +
                                            " outside the posterior columns");

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  // score(t, j): best path over frames 0..t ending in chain position j.
  Matrix score(T, S, kNegInf);
  std::vector<unsigned char> advanced(T * S, 0);
  score(0, 0) = log_posteriors(0, static_cast<std::size_t>(chain[0]));
  for (std::size_t t = 1; t < T; ++t) {
    // Position j is reachable at frame t only if j <= t and the remaining
    // frames can still reach the end.
    const std::size_t lo = S > T - t ? S - (T - t) : 0;
    const std::size_t hi = std::min(t, S - 1);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double stay = score(t - 1, j);
      const double adv = j > 0 ? score(t - 1, j - 1) : kNegInf;
      const bool take_adv = adv >= stay && adv != kNegInf;
      score(t, j) = (take_adv ? adv : stay) +
                    log_posteriors(t, static_cast<std::size_t>(chain[j]));
      advanced[t * S + j] = take_adv ? 1 : 0;
    }
  }

  AlignmentResult out;
  out.log_score = score(T - 1, S - 1);
  out.state_ids.resize(T);
  std::size_t j = S - 1;
  for (std::size_t t = T; t-- > 0;) {
    out.state_ids[t] = chain[j];
    if (t > 0 && advanced[t * S + j]) --j;
  }
  return out;
}

AlignmentResult viterbi_align(const Matrix& posteriors, const g2p::PhoneSeq& phones,
                              const HmmTopology& topology, const AlignOptions& opts) {
  if (posteriors.cols() != topology.total_states())
    throw Error(Errc::kShapeMismatch, "posterior width " + std::to_string(posteriors.cols()) +
                                          " does not match " +
                                          std::to_string(topology.total_states()) + " states");
  Matrix logp(posteriors.rows(), posteriors.cols());
  for (std::size_t i = 0; i < logp.flat().size(); ++i)
    logp.flat()[i] = std::log(std::max(posteriors.flat()[i], kLogFloor));
  return viterbi_chain(logp, expand_chain(phones, topology, opts));
}

}  // namespace asrwb::net
