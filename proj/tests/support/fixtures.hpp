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

// Shared fixtures for the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "asrwb/net/network.hpp"
#include "asrwb/net/train.hpp"
#include "oracles/oracles.hpp"

namespace asrwb::fixture {

inline net::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                 double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  net::Matrix m(rows, cols);
  for (double& v : m.flat()) v = u(rng);
  return m;
}

/// 2..4 layers of width 2..5, random trainable flags (at least one set),
/// weights in [-1, 1] and non-zero biases so no unit sits at a symmetric point.
inline net::NetState random_small_net(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> depth(2, 4), width(2, 5);
  net::NetSpec spec;
  const std::size_t layers = depth(rng);
  for (std::size_t l = 0; l <= layers; ++l) spec.layer_dims.push_back(width(rng));
  std::bernoulli_distribution coin(0.7);
  for (std::size_t l = 0; l < layers; ++l) spec.trainable.push_back(coin(rng));
  if (std::none_of(spec.trainable.begin(), spec.trainable.end(), [](bool b) { return b; }))
    spec.trainable[layers - 1] = true;

  net::NetState net = net::NetState::init(spec, rng());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& layer : net.layers) {
    for (double& w : layer.weights.flat()) w = u(rng);
    for (double& b : layer.bias) b = 0.5 * u(rng);
  }
  return net;
}

/// A prior over a random non-empty subset of layers (the output layer
/// included sometimes), collected from an unrelated random batch.
inline net::CoactPrior random_prior(const net::NetState& net, std::mt19937_64& rng) {
  std::vector<std::size_t> layers;
  std::bernoulli_distribution coin(0.6);
  for (std::size_t l = 0; l < net.layers.size(); ++l)
    if (coin(rng)) layers.push_back(l);
  if (layers.empty()) layers.push_back(0);
  const net::Matrix data = random_matrix(rng, 16, net.input_dim(), -2.0, 2.0);
  return net::collect_prior(net, data, layers, 0.1);
}

struct GradCheck {
  double max_rel_error = 0.0;          // worst tensor: ||a - n|| / max(||a||, ||n||)
  double max_abs_error = 0.0;          // worst single parameter
  std::size_t parameters = 0;
};

/// Central differences over every trainable parameter of `net` against
/// backward(). Frozen layers must report exactly zero.
inline GradCheck check_gradients(const net::NetState& net, const net::Matrix& batch,
                                 const std::vector<int>& targets, const net::CoactPrior* prior,
                                 double lambda, double h = 1e-5) {
  const net::Gradients g = net::backward(net, batch, targets, prior, lambda);
  GradCheck out;
  auto tensor = [&](std::span<const double> params, std::span<const double> analytic,
                    auto&& set) {
    std::vector<double> x(params.begin(), params.end());
    const std::vector<double> numeric = oracle::central_differences(
        x,
        [&](const std::vector<double>& p) {
          net::NetState probe = net;
          set(probe, p);
          return net::loss(probe, batch, targets, prior, lambda).total;
        },
        h);
    double diff = 0.0, na = 0.0, nn = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
      na += analytic[i] * analytic[i];
      nn += numeric[i] * numeric[i];
      out.max_abs_error = std::max(out.max_abs_error, std::fabs(analytic[i] - numeric[i]));
    }
    const double scale = std::max(std::sqrt(na), std::sqrt(nn));
    if (scale > 0.0) out.max_rel_error = std::max(out.max_rel_error, std::sqrt(diff) / scale);
    out.parameters += numeric.size();
  };
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    if (!net.layers[l].trainable) {
      for (double v : g.weights[l].flat())
        if (v != 0.0) out.max_rel_error = INFINITY;
      continue;
    }
    tensor(net.layers[l].weights.flat(), g.weights[l].flat(),
           [l](net::NetState& n, const std::vector<double>& p) {
             std::copy(p.begin(), p.end(), n.layers[l].weights.flat().begin());
           });
    tensor(net.layers[l].bias, g.bias[l], [l](net::NetState& n, const std::vector<double>& p) {
      n.layers[l].bias = p;
    });
  }
  return out;
}

/// Three Gaussian classes in `dim` dimensions. The mismatched condition adds
/// a fixed channel offset plus extra white noise to every frame.
struct FrameTask {
  std::size_t dim = 8;
  std::vector<net::Vector> class_means;
  net::Vector channel_offset;
  double clean_sigma = 0.9;
  double extra_sigma = 0.3;

  static FrameTask make(std::uint64_t seed, std::size_t dim = 8) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    FrameTask t;
    t.dim = dim;
    for (int c = 0; c < 3; ++c) {
      net::Vector m(dim);
      for (double& v : m) v = 1.2 * n01(rng);
      t.class_means.push_back(std::move(m));
    }
    t.channel_offset.resize(dim);
    for (double& v : t.channel_offset) v = 1.5 * n01(rng);
    return t;
  }

  net::Dataset sample(std::mt19937_64& rng, std::size_t frames, bool mismatched) const {
    std::normal_distribution<double> n01(0.0, 1.0);
    net::Dataset ds;
    ds.features = net::Matrix(frames, dim);
    ds.labels.resize(frames);
    for (std::size_t r = 0; r < frames; ++r) {
      const int c = static_cast<int>(r % 3);
      ds.labels[r] = c;
      for (std::size_t d = 0; d < dim; ++d) {
        double v = class_means[c][d] + clean_sigma * n01(rng);
        if (mismatched) v += channel_offset[d] + extra_sigma * n01(rng);
        ds.features(r, d) = v;
      }
    }
    return ds;
  }
};

/// Per-column mean and standard deviation, for the frozen input layer.
inline void normalize_input(net::NetState& net, const net::Matrix& x) {
  const net::Vector mean = net::column_means(x);
  net::Vector sd(x.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < x.cols(); ++c) sd[c] += (x(r, c) - mean[c]) * (x(r, c) - mean[c]);
  for (double& s : sd) s = std::max(std::sqrt(s / double(x.rows())), 1e-8);
  net.set_input_normalization(mean, sd);
}

struct AdaptTrial {
  double unadapted_accuracy = 0.0;
  double adapted_accuracy = 0.0;
  std::size_t steps = 0;
  std::size_t non_increasing_steps = 0;
};

struct AdaptTrialConfig {
  std::size_t train_frames = 1500;
  std::size_t adapt_frames = 600;
  std::size_t test_frames = 1500;
  std::size_t hidden = 16;
  std::size_t epochs = 30;
  double train_lr = 0.3;
  double lambda = 0.5;
  std::size_t adapt_steps = 150;
  double adapt_lr = 0.003;
};

/// Train on clean frames, record the prior, then compare the unadapted net
/// with one adapted (labels unused) on mismatched frames. Accuracy is
/// measured on a separate mismatched test set. The first trainable layer is
/// unfrozen first, then the second.
inline AdaptTrial run_adapt_trial(std::uint64_t seed, const AdaptTrialConfig& cfg = {}) {
  const FrameTask task = FrameTask::make(seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  const net::Dataset clean = task.sample(rng, cfg.train_frames, false);
  const net::Dataset adapt_set = task.sample(rng, cfg.adapt_frames, true);
  const net::Dataset test_set = task.sample(rng, cfg.test_frames, true);

  net::NetState net = net::NetState::init(net::NetSpec::aligner(task.dim, 3, cfg.hidden), seed);
  normalize_input(net, clean.features);
  net::TrainOptions topts;
  topts.epochs = cfg.epochs;
  topts.learning_rate = cfg.train_lr;
  topts.seed = seed;
  net = net::train(std::move(net), clean, topts).net;

  const net::CoactPrior prior =
      net::collect_prior(net, clean.features, net::default_monitored_layers(net));

  net::AdaptOptions aopts;
  aopts.lambda = cfg.lambda;
  aopts.steps = cfg.adapt_steps;
  aopts.learning_rate = cfg.adapt_lr;
  aopts.layer_schedule = {1, 2};
  const net::AdaptResult adapted = net::adapt(net, {adapt_set.features}, prior, aopts);

  AdaptTrial trial;
  trial.unadapted_accuracy = net::accuracy(net, test_set);
  trial.adapted_accuracy = net::accuracy(adapted.net, test_set);
  for (std::size_t i = 1; i < adapted.penalty_trace.size(); ++i) {
    ++trial.steps;
    if (adapted.penalty_trace[i] <= adapted.penalty_trace[i - 1]) ++trial.non_increasing_steps;
  }
  return trial;
}

}  // namespace asrwb::fixture
