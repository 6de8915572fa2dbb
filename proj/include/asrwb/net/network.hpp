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
#include <span>
#include <vector>

#include "asrwb/net/matrix.hpp"

namespace asrwb::net {

/// Layer sizes and which layers gradient descent may touch. Every layer but
/// the last is sigmoid; the last is softmax.
struct NetSpec {
  std::vector<std::size_t> layer_dims;  // input dim followed by each layer's width
  std::vector<bool> trainable;          // one flag per layer

  std::size_t num_layers() const { return trainable.size(); }

  /// The aligner topology: seven layers, the first a fixed input
  /// normalization (input_dim -> input_dim), then five sigmoid hidden layers
  /// of `hidden` units and a softmax over `num_classes`.
  static NetSpec aligner(std::size_t input_dim, std::size_t num_classes,
                         std::size_t hidden = 64);

  /// Shapes must be consistent. With `aligner_rules` the net must also have
  /// exactly seven layers with at least one trainable and one frozen.
  /// Throws Error(kShapeMismatch / kInvalidArgument).
  void validate(bool aligner_rules = false) const;

  bool operator==(const NetSpec&) const = default;
};

struct Layer {
  Matrix weights;  // out x in
  Vector bias;
  bool trainable = true;
  bool operator==(const Layer&) const = default;
};

struct NetState {
  NetSpec spec;
  std::vector<Layer> layers;

  /// Xavier-uniform weights, zero biases. Square frozen layers start as the
  /// identity.
  static NetState init(const NetSpec& spec, std::uint64_t seed);

  /// Makes layer 0 compute (x - mean) / stddev. Requires a square layer 0.
  void set_input_normalization(std::span<const double> mean, std::span<const double> stddev);

  std::size_t input_dim() const { return spec.layer_dims.front(); }
  std::size_t output_dim() const { return spec.layer_dims.back(); }
  bool operator==(const NetState&) const = default;
};

/// activations[l] is the output of layer l (N x width); the last entry holds
/// the softmax posteriors.
struct Activations {
  std::vector<Matrix> layers;
  const Matrix& posteriors() const { return layers.back(); }
};

/// Throws Error(kShapeMismatch) when batch columns != input dim.
Activations forward(const NetState& net, const Matrix& batch);

double sigmoid(double x);

/// Per-layer co-activation statistics of matched-condition data.
struct LayerPrior {
  std::size_t layer = 0;  // index into NetState::layers
  Vector mean;
  Matrix precision;       // (covariance + ridge * I)^-1, symmetric
  double ridge = 1e-3;
  bool operator==(const LayerPrior&) const = default;
};

struct CoactPrior {
  std::vector<LayerPrior> layers;
  bool operator==(const CoactPrior&) const = default;
};

struct CoactStats {
  Vector mean;
  Matrix precision;
};

inline constexpr double kDefaultRidge = 1e-3;

/// Column means and the inverse of (1/N) sum (a - m)(a - m)^T + ridge * I.
/// Throws Error(kInvalidArgument) for N == 0 or ridge <= 0.
CoactStats coact_stats(const Matrix& activations, double ridge = kDefaultRidge);

/// Hidden layers 0 .. L-2 by default; `include_output` adds layer L-1.
std::vector<std::size_t> default_monitored_layers(const NetState& net,
                                                  bool include_output = false);

/// Runs `data` through the net and records statistics for each listed layer.
CoactPrior collect_prior(const NetState& net, const Matrix& data,
                         const std::vector<std::size_t>& layers,
                         double ridge = kDefaultRidge);

/// sum over monitored layers of (m_l - mu_l)^T P_l (m_l - mu_l).
/// `batch_means[k]` pairs with `prior.layers[k]`.
/// Throws Error(kShapeMismatch) on dimension mismatch.
double coact_penalty(const std::vector<Vector>& batch_means, const CoactPrior& prior);

/// Batch means of the layers a prior monitors.
std::vector<Vector> monitored_means(const Activations& acts, const CoactPrior& prior);

struct LossTerms {
  double cross_entropy = 0.0;
  double penalty = 0.0;
  double total = 0.0;
};

/// Mean cross-entropy plus lambda times the co-activation penalty of the
/// batch. `prior` may be null (or lambda 0) for plain cross-entropy.
LossTerms loss(const NetState& net, const Matrix& batch, std::span<const int> targets,
               const CoactPrior* prior, double lambda);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> bias;
};

/// Exact gradients of `loss`. Frozen layers get zero parameter gradients but
/// still pass the signal down.
Gradients backward(const NetState& net, const Matrix& batch, std::span<const int> targets,
                   const CoactPrior* prior, double lambda, LossTerms* terms = nullptr);

/// Gradients of lambda * penalty alone (no labels), as used for adaptation.
Gradients penalty_gradients(const NetState& net, const Matrix& batch,
                            const CoactPrior& prior, double lambda,
                            double* penalty = nullptr);

}  // namespace asrwb::net
