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
#include "asrwb/net/train.hpp"
#include "support/fixtures.hpp"

using namespace asrwb;

namespace {

net::Dataset task_data(std::uint64_t seed, std::size_t n, bool mismatched) {
  const auto task = fixture::FrameTask::make(seed);
  std::mt19937_64 rng(seed + 100);
  return task.sample(rng, n, mismatched);
}

net::NetState fresh_net(const net::Dataset& d) {
  net::NetState n = net::NetState::init(net::NetSpec::aligner(d.features.cols(), 3, 16), 3);
  fixture::normalize_input(n, d.features);
  return n;
}

}  // namespace

TEST_CASE("training is deterministic for a seed and learns the clean task") {
  const net::Dataset d = task_data(1, 600, false);
  net::TrainOptions o;
  o.epochs = 25;
  o.learning_rate = 0.3;
  const net::TrainResult a = net::train(fresh_net(d), d, o);
  const net::TrainResult b = net::train(fresh_net(d), d, o);
  CHECK(a.net == b.net);
  CHECK(a.metrics == b.metrics);
  REQUIRE(a.metrics.size() == 25);
  CHECK(a.metrics.back().accuracy > 0.9);
  CHECK(a.metrics.back().loss < a.metrics.front().loss);
  CHECK(net::accuracy(a.net, d) == doctest::Approx(a.metrics.back().accuracy));
}

TEST_CASE("frozen layers never move during training") {
  const net::Dataset d = task_data(2, 90, false);
  const net::NetState start = fresh_net(d);
  net::TrainOptions o;
  o.epochs = 2;
  const net::TrainResult r = net::train(start, d, o);
  CHECK(r.net.layers[0] == start.layers[0]);
  CHECK(!(r.net.layers[6] == start.layers[6]));
}

TEST_CASE("train rejects inconsistent data") {
  net::Dataset d = task_data(3, 30, false);
  d.labels.pop_back();
  CHECK_THROWS_AS(net::train(fresh_net(task_data(3, 30, false)), d, {}), Error);
  net::Dataset bad_label = task_data(3, 30, false);
  bad_label.labels[0] = 7;
  CHECK_THROWS_AS(net::train(fresh_net(bad_label), bad_label, {}), Error);
}

TEST_CASE("argmax_rows takes the first maximum") {
  CHECK(net::argmax_rows(net::Matrix::from_rows({{0.1, 0.7, 0.2}, {0.5, 0.5, 0.0}})) ==
        std::vector<int>{1, 0});
}

TEST_CASE("adapt with lambda 0 returns the network unchanged") {
  const net::Dataset d = task_data(4, 60, false);
  const net::NetState n = fresh_net(d);
  const auto prior = net::collect_prior(n, d.features, net::default_monitored_layers(n));
  net::AdaptOptions o;
  o.lambda = 0.0;
  const net::AdaptResult r = net::adapt(n, {d.features}, prior, o);
  CHECK(r.net == n);
  CHECK(r.penalty_trace.size() == 1);
}

TEST_CASE("adapt lowers the penalty on mismatched data, touching only scheduled layers") {
  const net::Dataset clean = task_data(5, 600, false);
  net::TrainOptions t;
  t.epochs = 10;
  t.learning_rate = 0.3;
  const net::NetState n = net::train(fresh_net(clean), clean, t).net;
  const auto prior = net::collect_prior(n, clean.features, net::default_monitored_layers(n));
  const net::Dataset noisy = task_data(5, 300, true);

  net::AdaptOptions o;
  o.steps = 40;
  o.learning_rate = 0.003;
  o.layer_schedule = {1};
  const net::AdaptResult r = net::adapt(n, {noisy.features}, prior, o);
  REQUIRE(r.penalty_trace.size() == 41);
  CHECK(r.penalty_trace.back() < r.penalty_trace.front());
  for (std::size_t i = 1; i < r.penalty_trace.size(); ++i)
    CHECK(r.penalty_trace[i] <= r.penalty_trace[i - 1]);
  for (std::size_t l = 0; l < n.layers.size(); ++l)
    if (l != 1) CHECK(r.net.layers[l] == n.layers[l]);
  CHECK(!(r.net.layers[1] == n.layers[1]));
}

TEST_CASE("adapt schedule unfreezes cumulatively and validates layer indices") {
  const net::Dataset d = task_data(6, 60, true);
  const net::NetState n = fresh_net(d);
  const auto prior = net::collect_prior(n, task_data(6, 60, false).features, net::default_monitored_layers(n));
  net::AdaptOptions o;
  o.steps = 3;
  o.layer_schedule = {2, 3};
  const net::AdaptResult r = net::adapt(n, {d.features}, prior, o);
  CHECK(r.penalty_trace.size() == 7);
  CHECK(!(r.net.layers[2] == n.layers[2]));
  CHECK(!(r.net.layers[3] == n.layers[3]));
  CHECK(r.net.layers[4] == n.layers[4]);
  o.layer_schedule = {9};
  CHECK_THROWS_AS(net::adapt(n, {d.features}, prior, o), Error);
  CHECK_THROWS_AS(net::adapt(n, {}, prior, {}), Error);
}

TEST_CASE("one adaptation trial improves accuracy under mismatch") {
  const fixture::AdaptTrial t = fixture::run_adapt_trial(1);
  CHECK(t.adapted_accuracy > t.unadapted_accuracy);
  CHECK(t.non_increasing_steps == t.steps);
}
