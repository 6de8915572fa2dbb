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
#include <vector>

#include "asrwb/net/network.hpp"

namespace asrwb::net {

/// Labelled frames: one row per frame, labels are output-class indices.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
};

struct TrainOptions {
  std::size_t epochs = 10;
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
  /// Co-activation regularization during training; off when prior is null.
  const CoactPrior* prior = nullptr;
  double lambda = 0.0;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double loss = 0.0;      // full-dataset loss after the epoch
  double accuracy = 0.0;  // full-dataset frame accuracy after the epoch
  bool operator==(const EpochMetrics&) const = default;
};

struct TrainResult {
  NetState net;
  std::vector<EpochMetrics> metrics;
};

/// Mini-batch gradient descent at a fixed learning rate. The batch order is
/// reshuffled every epoch from `seed`, so equal inputs give bit-identical
/// results.
TrainResult train(NetState net, const Dataset& data, const TrainOptions& opts);

/// Fraction of rows whose argmax posterior equals the label.
double accuracy(const NetState& net, const Dataset& data);

std::vector<int> argmax_rows(const Matrix& m);

/// Applies w -= lr * g to trainable layers whose `enabled` flag is set
/// (all trainable layers when `enabled` is empty).
void apply_gradients(NetState& net, const Gradients& grads, double lr,
                     const std::vector<bool>& enabled = {});

struct AdaptOptions {
  double lambda = 0.5;
  std::size_t steps = 100;  // per schedule stage
  double learning_rate = 0.01;
  /// Layers unfrozen one stage at a time, cumulatively; empty means every
  /// trainable layer from the start. Frozen layers stay frozen.
  std::vector<std::size_t> layer_schedule;
};

struct AdaptResult {
  NetState net;
  /// Penalty before each step, then once more after the last step.
  std::vector<double> penalty_trace;
};

/// Unsupervised adaptation: gradient steps on lambda * coact_penalty alone,
/// cycling through `batches`. Lambda 0 returns the net unchanged.
AdaptResult adapt(NetState net, const std::vector<Matrix>& batches, const CoactPrior& prior,
                  const AdaptOptions& opts);

}  // namespace asrwb::net
