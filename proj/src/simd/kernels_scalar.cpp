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

#include "asrwb/simd/kernels.hpp"

#include <cmath>

namespace asrwb::simd {
namespace {

float abs_max_scalar(const float* x, std::size_t n) {
  float m = 0.0f;
  for (std::size_t i = 0; i < n; ++i) {
    const float a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void mul_scalar(const double* x, const double* w, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * w[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", abs_max_scalar, dot_scalar,
                                 axpy_scalar, mul_scalar};
  return table;
}

}  // namespace asrwb::simd
