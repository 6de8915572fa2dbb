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

#include "asrwb/net/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/simd/kernels.hpp"

namespace asrwb::net {

NetSpec NetSpec::aligner(std::size_t input_dim, std::size_t num_classes, std::size_t hidden) {
  NetSpec s;
  s.layer_dims = {input_dim, input_dim, hidden, hidden, hidden, hidden, hidden, num_classes};
  s.trainable = {false, true, true, true, true, true, true};
  return s;
}

void NetSpec::validate(bool aligner_rules) const {
  if (trainable.empty() || layer_dims.size() != trainable.size() + 1)
    throw Error(Errc::kShapeMismatch, "need one trainable flag per layer and " +
                                          std::to_string(trainable.size() + 1) + " dims");
  for (std::size_t d : layer_dims)
    if (d == 0) throw Error(Errc::kShapeMismatch, "layer widths must be positive");
  if (layer_dims.back() < 2)
    throw Error(Errc::kShapeMismatch, "softmax output needs at least 2 classes");
  if (aligner_rules) {
    if (trainable.size() != 7)
      throw Error(Errc::kInvalidArgument, "the aligner network has exactly 7 layers");
    const auto n_train = std::count(trainable.begin(), trainable.end(), true);
    if (n_train == 0 || n_train == 7)
      throw Error(Errc::kInvalidArgument,
                  "the aligner network needs both trainable and frozen layers");
  }
}

NetState NetState::init(const NetSpec& spec, std::uint64_t seed) {
  spec.validate();
  NetState net;
  net.spec = spec;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const std::size_t in = spec.layer_dims[l], out = spec.layer_dims[l + 1];
    Layer layer{Matrix(out, in), Vector(out, 0.0), spec.trainable[l]};
    if (!layer.trainable && in == out) {
      layer.weights = Matrix::identity(in);
    } else {
      // Glorot's range, scaled by 4 for sigmoid layers so that deep stacks
      // still pass a usable gradient at initialisation.
      const bool sigmoid_layer = l + 1 < spec.num_layers();
      const double limit =
          (sigmoid_layer ? 4.0 : 1.0) * std::sqrt(6.0 / static_cast<double>(in + out));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (double& w : layer.weights.flat()) w = dist(rng);
    }
    net.layers.push_back(std::move(layer));
  }
  return net;
}

void NetState::set_input_normalization(std::span<const double> mean,
                                       std::span<const double> stddev) {
  const std::size_t d = input_dim();
  if (layers.empty() || spec.layer_dims[1] != d || mean.size() != d || stddev.size() != d)
    throw Error(Errc::kShapeMismatch, "input normalization needs a square first layer");
  Layer& first = layers.front();
  first.weights = Matrix(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const double s = stddev[i] > 1e-12 ? stddev[i] : 1.0;
    first.weights(i, i) = 1.0 / s;
    first.bias[i] = -mean[i] / s;
  }
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

void check_batch(const NetState& net, const Matrix& batch) {
  if (batch.cols() != net.input_dim())
    throw Error(Errc::kShapeMismatch, "batch has " + std::to_string(batch.cols()) +
                                          " columns, network expects " +
                                          std::to_string(net.input_dim()));
  if (batch.rows() == 0) throw Error(Errc::kShapeMismatch, "empty batch");
}

Matrix affine(const Layer& layer, const Matrix& in) {
  Matrix z(in.rows(), layer.weights.rows());
  for (std::size_t n = 0; n < in.rows(); ++n) {
    const auto x = in.row(n);
    auto out = z.row(n);
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = layer.bias[j] + simd::dot(layer.weights.row(j), x);
  }
  return z;
}

void softmax_rows(Matrix& z) {
  for (std::size_t n = 0; n < z.rows(); ++n) {
    auto r = z.row(n);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (double& v : r) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (double& v : r) v /= sum;
  }
}

// Posteriors are clamped at 1e-300 so a saturated softmax gives a large but
// finite loss.
double mean_cross_entropy(const Matrix& post, std::span<const int> targets) {
  double ce = 0.0;
  for (std::size_t n = 0; n < post.rows(); ++n)
    ce -= std::log(std::max(post(n, static_cast<std::size_t>(targets[n])), 1e-300));
  return ce / static_cast<double>(post.rows());
}

void check_targets(const NetState& net, const Matrix& batch, std::span<const int> targets) {
  if (targets.size() != batch.rows())
    throw Error(Errc::kShapeMismatch, "one target per batch row required");
  for (int t : targets)
    if (t < 0 || static_cast<std::size_t>(t) >= net.output_dim())
      throw Error(Errc::kShapeMismatch, "target " + std::to_string(t) + " out of range");
}

void check_prior(const NetState& net, const CoactPrior& prior) {
  for (const LayerPrior& lp : prior.layers) {
    if (lp.layer >= net.layers.size())
      throw Error(Errc::kShapeMismatch, "prior refers to layer " + std::to_string(lp.layer));
    const std::size_t w = net.spec.layer_dims[lp.layer + 1];
    if (lp.mean.size() != w || lp.precision.rows() != w || lp.precision.cols() != w)
      throw Error(Errc::kShapeMismatch,
                  "prior for layer " + std::to_string(lp.layer) + " has the wrong width");
  }
}

// Shared by backward() and penalty_gradients(): `ce_weight` scales the
// cross-entropy term (0 drops it and ignores targets).
Gradients gradients_impl(const NetState& net, const Matrix& batch, std::span<const int> targets,
                         double ce_weight, const CoactPrior* prior, double lambda,
                         LossTerms* terms) {
  check_batch(net, batch);
  if (ce_weight != 0.0) check_targets(net, batch, targets);
  const bool has_prior = prior != nullptr && !prior->layers.empty();
  if (has_prior) check_prior(net, *prior);

  const Activations acts = forward(net, batch);
  const std::size_t L = net.layers.size();
  const std::size_t N = batch.rows();
  const double inv_n = 1.0 / static_cast<double>(N);

  // dPenalty/da for one row of each monitored layer: (2/N) P (m - mu).
  std::vector<Vector> act_grad(L);
  double penalty = 0.0;
  if (has_prior) {
    for (const LayerPrior& lp : prior->layers) {
      const Vector m = column_means(acts.layers[lp.layer]);
      Vector d(m.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = m[i] - lp.mean[i];
      Vector pd(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) pd[i] = simd::dot(lp.precision.row(i), d);
      penalty += simd::dot(d, pd);
      if (lambda == 0.0) continue;
      Vector& g = act_grad[lp.layer];
      if (g.empty()) g.assign(d.size(), 0.0);
      simd::axpy(2.0 * lambda * inv_n, pd, g);
    }
  }

  if (terms != nullptr) {
    terms->cross_entropy = ce_weight != 0.0 ? mean_cross_entropy(acts.posteriors(), targets) : 0.0;
    terms->penalty = penalty;
    terms->total = ce_weight * terms->cross_entropy + lambda * penalty;
  }

  Gradients grads;
  grads.weights.reserve(L);
  grads.bias.reserve(L);
  for (const Layer& layer : net.layers) {
    grads.weights.emplace_back(layer.weights.rows(), layer.weights.cols());
    grads.bias.emplace_back(layer.bias.size(), 0.0);
  }

  // Output layer: softmax + cross-entropy jointly gives (p - y) / N.
  const Matrix& post = acts.posteriors();
  Matrix dz(N, post.cols());
  for (std::size_t n = 0; n < N; ++n) {
    auto dzr = dz.row(n);
    const auto p = post.row(n);
    if (ce_weight != 0.0) {
      for (std::size_t k = 0; k < p.size(); ++k) dzr[k] = ce_weight * p[k] * inv_n;
      dzr[static_cast<std::size_t>(targets[n])] -= ce_weight * inv_n;
    }
    if (!act_grad[L - 1].empty()) {
      // softmax Jacobian: dz = p * (g - <g, p>)
      const Vector& g = act_grad[L - 1];
      const double gp = simd::dot(g, p);
      for (std::size_t k = 0; k < p.size(); ++k) dzr[k] += p[k] * (g[k] - gp);
    }
  }

  for (std::size_t l = L; l-- > 0;) {
    const Layer& layer = net.layers[l];
    const Matrix& input = l == 0 ? batch : acts.layers[l - 1];
    if (layer.trainable) {
      for (std::size_t n = 0; n < N; ++n) {
        const auto dzr = dz.row(n);
        const auto x = input.row(n);
        for (std::size_t j = 0; j < dzr.size(); ++j) {
          if (dzr[j] == 0.0) continue;
          simd::axpy(dzr[j], x, grads.weights[l].row(j));
          grads.bias[l][j] += dzr[j];
        }
      }
    }
    if (l == 0) break;

    // Back through the weights, add the penalty term, then the sigmoid.
    Matrix da(N, input.cols());
    for (std::size_t n = 0; n < N; ++n) {
      const auto dzr = dz.row(n);
      auto dar = da.row(n);
      for (std::size_t j = 0; j < dzr.size(); ++j)
        if (dzr[j] != 0.0) simd::axpy(dzr[j], layer.weights.row(j), dar);
      if (!act_grad[l - 1].empty()) simd::axpy(1.0, act_grad[l - 1], dar);
      const auto a = input.row(n);
      for (std::size_t i = 0; i < dar.size(); ++i) dar[i] *= a[i] * (1.0 - a[i]);
    }
    dz = std::move(da);
  }
  return grads;
}

}  // namespace

Activations forward(const NetState& net, const Matrix& batch) {
  check_batch(net, batch);
  Activations acts;
  acts.layers.reserve(net.layers.size());
  const Matrix* in = &batch;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    Matrix z = affine(net.layers[l], *in);
    if (l + 1 == net.layers.size()) {
      softmax_rows(z);
    } else {
      for (double& v : z.flat()) v = sigmoid(v);
    }
    acts.layers.push_back(std::move(z));
    in = &acts.layers.back();
  }
  return acts;
}

std::vector<std::size_t> default_monitored_layers(const NetState& net, bool include_output) {
  std::vector<std::size_t> out;
  const std::size_t L = net.layers.size();
  for (std::size_t l = 0; l + 1 < L; ++l) out.push_back(l);
  if (include_output) out.push_back(L - 1);
  return out;
}

CoactPrior collect_prior(const NetState& net, const Matrix& data,
                         const std::vector<std::size_t>& layers, double ridge) {
  const Activations acts = forward(net, data);
  CoactPrior prior;
  for (std::size_t l : layers) {
    if (l >= acts.layers.size())
      throw Error(Errc::kShapeMismatch, "no layer " + std::to_string(l));
    CoactStats s = coact_stats(acts.layers[l], ridge);
    prior.layers.push_back({l, std::move(s.mean), std::move(s.precision), ridge});
  }
  return prior;
}

double coact_penalty(const std::vector<Vector>& batch_means, const CoactPrior& prior) {
  if (batch_means.size() != prior.layers.size())
    throw Error(Errc::kShapeMismatch, "one batch mean per monitored layer required");
  double total = 0.0;
  for (std::size_t k = 0; k < prior.layers.size(); ++k) {
    const LayerPrior& lp = prior.layers[k];
    const Vector& m = batch_means[k];
    if (m.size() != lp.mean.size() || lp.precision.rows() != m.size() ||
        lp.precision.cols() != m.size())
      throw Error(Errc::kShapeMismatch, "monitored layer " + std::to_string(lp.layer) +
                                            " dimension mismatch");
    Vector d(m.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = m[i] - lp.mean[i];
    for (std::size_t i = 0; i < d.size(); ++i)
      total += d[i] * simd::dot(lp.precision.row(i), d);
  }
  return total;
}

std::vector<Vector> monitored_means(const Activations& acts, const CoactPrior& prior) {
  std::vector<Vector> means;
  for (const LayerPrior& lp : prior.layers) {
    if (lp.layer >= acts.layers.size())
      throw Error(Errc::kShapeMismatch, "no layer " + std::to_string(lp.layer));
    means.push_back(column_means(acts.layers[lp.layer]));
  }
  return means;
}

LossTerms loss(const NetState& net, const Matrix& batch, std::span<const int> targets,
               const CoactPrior* prior, double lambda) {
  check_batch(net, batch);
  check_targets(net, batch, targets);
  const Activations acts = forward(net, batch);
  LossTerms t;
  t.cross_entropy = mean_cross_entropy(acts.posteriors(), targets);
  if (prior != nullptr && !prior->layers.empty()) {
    check_prior(net, *prior);
    t.penalty = coact_penalty(monitored_means(acts, *prior), *prior);
  }
  t.total = t.cross_entropy + lambda * t.penalty;
  return t;
}

Gradients backward(const NetState& net, const Matrix& batch, std::span<const int> targets,
                   const CoactPrior* prior, double lambda, LossTerms* terms) {
  return gradients_impl(net, batch, targets, 1.0, prior, lambda, terms);
}

Gradients penalty_gradients(const NetState& net, const Matrix& batch, const CoactPrior& prior,
                            double lambda, double* penalty) {
  LossTerms terms;
  Gradients g = gradients_impl(net, batch, {}, 0.0, &prior, lambda, &terms);
  if (penalty != nullptr) *penalty = terms.penalty;
  return g;
}

}  // namespace asrwb::net
