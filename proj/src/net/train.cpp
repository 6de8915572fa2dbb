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

#include "asrwb/net/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/simd/kernels.hpp"

namespace asrwb::net {

std::vector<int> argmax_rows(const Matrix& m) {
  std::vector<int> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    out[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

double accuracy(const NetState& net, const Dataset& data) {
  if (data.features.rows() == 0) return 0.0;
  const std::vector<int> pred = argmax_rows(forward(net, data.features).posteriors());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == data.labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

void apply_gradients(NetState& net, const Gradients& grads, double lr,
                     const std::vector<bool>& enabled) {
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Layer& layer = net.layers[l];
    if (!layer.trainable || (!enabled.empty() && !enabled[l])) continue;
    simd::axpy(-lr, grads.weights[l].flat(), layer.weights.flat());
    simd::axpy(-lr, grads.bias[l], layer.bias);
  }
}

TrainResult train(NetState net, const Dataset& data, const TrainOptions& opts) {
  if (data.features.rows() != data.labels.size())
    throw Error(Errc::kShapeMismatch, "one label per frame required");
  if (data.features.rows() == 0) throw Error(Errc::kEmptyInput, "empty training set");
  if (opts.batch_size == 0) throw Error(Errc::kInvalidArgument, "batch size must be positive");

  TrainResult result;
  std::mt19937_64 rng(opts.seed);
  const std::size_t n = data.features.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (std::size_t epoch = 1; epoch <= opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t at = 0; at < n; at += opts.batch_size) {
      const std::span<const std::size_t> idx(order.data() + at,
                                             std::min(opts.batch_size, n - at));
      const Matrix batch = gather_rows(data.features, idx);
      std::vector<int> targets(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) targets[i] = data.labels[idx[i]];
      const Gradients g = backward(net, batch, targets, opts.prior, opts.lambda);
      if (opts.learning_rate != 0.0) apply_gradients(net, g, opts.learning_rate);
    }
    const LossTerms terms = loss(net, data.features, data.labels, opts.prior, opts.lambda);
    result.metrics.push_back({epoch, terms.total, accuracy(net, data)});
  }
  result.net = std::move(net);
  return result;
}

AdaptResult adapt(NetState net, const std::vector<Matrix>& batches, const CoactPrior& prior,
                  const AdaptOptions& opts) {
  if (batches.empty()) throw Error(Errc::kEmptyInput, "adaptation needs at least one batch");
  for (const Matrix& b : batches)
    if (b.cols() != net.input_dim())
      throw Error(Errc::kShapeMismatch, "adaptation batch width does not match the network");
  for (std::size_t l : opts.layer_schedule)
    if (l >= net.layers.size())
      throw Error(Errc::kShapeMismatch, "schedule names layer " + std::to_string(l));

  AdaptResult result;
  auto current_penalty = [&](const Matrix& batch) {
    return coact_penalty(monitored_means(forward(net, batch), prior), prior);
  };
  if (opts.lambda == 0.0) {
    result.penalty_trace.push_back(current_penalty(batches.front()));
    result.net = std::move(net);
    return result;
  }

  const std::size_t stages = std::max<std::size_t>(1, opts.layer_schedule.size());
  std::vector<bool> enabled(net.layers.size(), opts.layer_schedule.empty());
  std::size_t step = 0;
  for (std::size_t stage = 0; stage < stages; ++stage) {
    if (!opts.layer_schedule.empty()) enabled[opts.layer_schedule[stage]] = true;
    for (std::size_t s = 0; s < opts.steps; ++s, ++step) {
      const Matrix& batch = batches[step % batches.size()];
      double penalty = 0.0;
      const Gradients g = penalty_gradients(net, batch, prior, opts.lambda, &penalty);
      result.penalty_trace.push_back(penalty);
      apply_gradients(net, g, opts.learning_rate, enabled);
    }
  }
  result.penalty_trace.push_back(current_penalty(batches[step % batches.size()]));
  result.net = std::move(net);
  return result;
}

}  // namespace asrwb::net
