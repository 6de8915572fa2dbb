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

#include <cmath>
#include <random>

#include "asrwb/error.hpp"
#include "asrwb/net/viterbi.hpp"
#include "oracles/oracles.hpp"

using namespace asrwb;

TEST_CASE("topology layout") {
  const net::HmmTopology topo{{"a", "k"}};
  CHECK(topo.total_states() == 7);
  CHECK(topo.phone_state(1, 0) == 4);
  CHECK(topo.state_phone(0) == "sil");
  CHECK(topo.state_phone(3) == "a");
  CHECK(topo.state_phone(4) == "k");
  CHECK(topo.phone_index("k") == 1);
  CHECK_THROWS_AS(topo.phone_index("zz"), Error);
  CHECK(net::expand_chain({"k", "a"}, topo) == std::vector<int>{0, 4, 5, 6, 1, 2, 3, 0});
  CHECK(net::expand_chain({"a"}, topo, {false, false}) == std::vector<int>{1, 2, 3});
}

TEST_CASE("the inventory topology covers every g2p phone") {
  const net::HmmTopology topo = net::HmmTopology::from_inventory();
  CHECK(topo.total_states() == 1 + 3 * g2p::G2pTables::bundled().inventory().size());
  CHECK_NOTHROW(net::expand_chain(g2p::g2p("विद्यालय"), topo));
}

TEST_CASE("viterbi_chain equals exhaustive enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int inst = 0; inst < 300; ++inst) {
    const std::size_t T = 1 + rng() % 8, S = 1 + rng() % std::min<std::size_t>(T, 6);
    const std::size_t K = S + rng() % 3;
    std::vector<int> chain(S);
    for (int& c : chain) c = static_cast<int>(rng() % K);
    net::Matrix lp(T, K);
    for (double& v : lp.flat()) v = std::log(u(rng) + 1e-12);
    const auto ref = oracle::best_monotonic_path(
        T, S, [&](std::size_t t, std::size_t j) { return lp(t, static_cast<std::size_t>(chain[j])); });
    const auto got = net::viterbi_chain(lp, chain);
    REQUIRE(got.state_ids.size() == T);
    for (std::size_t t = 0; t < T; ++t) CHECK(got.state_ids[t] == chain[ref.positions[t]]);
    CHECK(got.log_score == doctest::Approx(ref.score).epsilon(1e-12));
  }
}

TEST_CASE("ties prefer advancing") {
  const net::Matrix flat(3, 2, 0.0);
  // Backtracking from the end, a tie picks the advancing predecessor, so the
  // advance lands as late as possible.
  CHECK(net::viterbi_chain(flat, {0, 1}).state_ids == std::vector<int>{0, 0, 1});
  CHECK(net::viterbi_chain(net::Matrix(4, 3, 0.0), {0, 1, 2}).state_ids == std::vector<int>{0, 0, 1, 2});
}

TEST_CASE("viterbi errors") {
  try {
    net::viterbi_chain(net::Matrix(2, 3), {0, 1, 2});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kTooFewFrames);
  }
  CHECK_THROWS_AS(net::viterbi_chain(net::Matrix(4, 2), {0, 5}), Error);
  const net::HmmTopology topo{{"a"}};
  CHECK_THROWS_AS(net::viterbi_align(net::Matrix(9, 3, 0.3), {"a"}, topo), Error);  // width 3 != 4
}

TEST_CASE("viterbi_align recovers a planted alignment") {
  const net::HmmTopology topo{{"a", "k"}};
  // Frames: sil sil k k k k a a a sil  -> states 0 0 4 5 5 6 1 2 3 0
  const std::vector<int> planted{0, 0, 4, 5, 5, 6, 1, 2, 3, 0};
  net::Matrix post(planted.size(), topo.total_states(), 0.02);
  for (std::size_t t = 0; t < planted.size(); ++t) post(t, planted[t]) = 0.88;
  const auto r = net::viterbi_align(post, {"k", "a"}, topo);
  CHECK(r.state_ids == planted);
  CHECK(r.log_score == doctest::Approx(10 * std::log(0.88)));
}

TEST_CASE("zero posteriors are floored, not -inf") {
  const net::HmmTopology topo{{"a"}};
  net::Matrix post(3, 4, 0.0);
  const auto r = net::viterbi_align(post, {"a"}, topo, {false, false});
  CHECK(std::isfinite(r.log_score));
  CHECK(r.state_ids == std::vector<int>{1, 2, 3});
}
