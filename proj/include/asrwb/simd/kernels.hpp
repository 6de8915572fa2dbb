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

// Data-parallel inner loops used by the signal and network code. Every kernel
// has a portable scalar reference; wider variants are compiled into separate
// translation units and picked once at startup from the CPU feature set.

#include <cstddef>
#include <span>
#include <string_view>

namespace asrwb::simd {

struct KernelTable {
  std::string_view name;
  // max |x[i]|, 0 for an empty range.
  float (*abs_max)(const float* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] = x[i] * w[i]
  void (*mul)(const double* x, const double* w, double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the build or the running CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

/// The table in use for this process. Chosen on first call; setting
/// ASRWB_SIMD=scalar in the environment forces the reference kernels.
const KernelTable& active();

inline float abs_max(std::span<const float> x) {
  return active().abs_max(x.data(), x.size());
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void mul(std::span<const double> x, std::span<const double> w,
                std::span<double> y) {
  active().mul(x.data(), w.data(), y.data(), x.size());
}

}  // namespace asrwb::simd
