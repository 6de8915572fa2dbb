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

#include "asrwb/net/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "asrwb/error.hpp"
#include "asrwb/simd/kernels.hpp"

namespace asrwb::net {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Band edge frequencies: num_bands + 2 points equally spaced on the mel scale.
Vector band_edges_hz(std::size_t num_bands) {
  const double top = hz_to_mel(audio::kTargetRateHz / 2.0);
  Vector edges(num_bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(top * static_cast<double>(i) / static_cast<double>(num_bands + 1));
  return edges;
}

// Precomputed analysis tables for one configuration.
struct Analyzer {
  std::size_t window;
  std::size_t num_bins;
  Vector hamming;
  Matrix cos_basis;   // num_bins x window
  Matrix sin_basis;   // num_bins x window
  Matrix filterbank;  // num_bands x num_bins

  explicit Analyzer(const FeatureConfig& cfg)
      : window(cfg.window_samples),
        num_bins(cfg.window_samples / 2 + 1),
        hamming(cfg.window_samples),
        cos_basis(num_bins, window),
        sin_basis(num_bins, window),
        filterbank(cfg.num_bands, num_bins) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double denom = window > 1 ? static_cast<double>(window - 1) : 1.0;
    for (std::size_t n = 0; n < window; ++n)
      hamming[n] = 0.54 - 0.46 * std::cos(two_pi * static_cast<double>(n) / denom);
    for (std::size_t k = 0; k < num_bins; ++k)
      for (std::size_t n = 0; n < window; ++n) {
        // k*n mod N keeps the angle argument small and exact.
        const double phase = two_pi * static_cast<double>((k * n) % window) /
                             static_cast<double>(window);
        cos_basis(k, n) = std::cos(phase);
        sin_basis(k, n) = std::sin(phase);
      }

    const Vector edges = band_edges_hz(cfg.num_bands);
    const double bin_hz = static_cast<double>(audio::kTargetRateHz) / static_cast<double>(window);
    for (std::size_t b = 0; b < cfg.num_bands; ++b) {
      const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
      for (std::size_t k = 0; k < num_bins; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        double w = 0.0;
        if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
        else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
        filterbank(b, k) = w;
      }
    }
  }
};

}  // namespace

std::size_t frame_count(std::size_t num_samples, std::size_t window, std::size_t shift) {
  if (num_samples < window) return 0;
  return 1 + (num_samples - window) / shift;
}

Vector band_centers_hz(const FeatureConfig& cfg) {
  const Vector edges = band_edges_hz(cfg.num_bands);
  return Vector(edges.begin() + 1, edges.end() - 1);
}

FeatureMatrix extract_features(const audio::AudioBuffer& buffer, const FeatureConfig& cfg) {
  if (buffer.channels != 1 || buffer.sample_rate_hz != audio::kTargetRateHz)
    throw Error(Errc::kInvalidArgument, "features expect mono 16 kHz audio");
  if (cfg.window_samples < 2 || cfg.shift_samples < 1 || cfg.num_bands < 1 ||
      !(cfg.log_floor > 0.0))
    throw Error(Errc::kInvalidArgument, "invalid feature configuration");
  const std::size_t n = buffer.samples.size();
  if (n < cfg.window_samples)
    throw Error(Errc::kTooShort, std::to_string(n) + " samples is shorter than one " +
                                     std::to_string(cfg.window_samples) + "-sample window");

  const Analyzer an(cfg);
  const std::size_t frames = frame_count(n, cfg.window_samples, cfg.shift_samples);
  FeatureMatrix out{Matrix(frames, cfg.num_bands), cfg.shift_samples, cfg.window_samples};

  Vector raw(an.window), windowed(an.window), power(an.num_bins);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t at = t * cfg.shift_samples;
    for (std::size_t i = 0; i < an.window; ++i) raw[i] = buffer.samples[at + i];
    simd::mul(raw, an.hamming, windowed);
    for (std::size_t k = 0; k < an.num_bins; ++k) {
      const double re = simd::dot(windowed, an.cos_basis.row(k));
      const double im = simd::dot(windowed, an.sin_basis.row(k));
      power[k] = re * re + im * im;
    }
    for (std::size_t b = 0; b < cfg.num_bands; ++b) {
      const double energy = simd::dot(power, an.filterbank.row(b));
      out.frames(t, b) = std::log(std::max(energy, cfg.log_floor));
    }
  }
  return out;
}

}  // namespace asrwb::net
