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

#include <cstdlib>
#include <string_view>

#include <cmath>
#include <random>
#include <vector>

#include "asrwb/simd/kernels.hpp"

using namespace asrwb;

namespace {

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match their definitions") {
  const simd::KernelTable& k = simd::scalar_kernels();
  const float f[] = {0.25f, -0.75f, 0.5f};
  CHECK(k.abs_max(f, 3) == 0.75f);
  CHECK(k.abs_max(f, 0) == 0.0f);
  const double x[] = {1, 2, 3}, y[] = {4, -5, 6};
  CHECK(k.dot(x, y, 3) == 12.0);
  double z[] = {1, 1, 1};
  k.axpy(2.0, x, z, 3);
  CHECK(z[0] == 3.0);
  CHECK(z[2] == 7.0);
  k.mul(x, y, z, 3);
  CHECK(z[1] == -10.0);
}

TEST_CASE("AVX2 kernels are equivalent to the scalar reference") {
  const simd::KernelTable* wide = simd::avx2_kernels();
  if (wide == nullptr) {
    MESSAGE("AVX2 unavailable on this build or CPU; nothing to compare");
    return;
  }
  const simd::KernelTable& ref = simd::scalar_kernels();
  std::mt19937_64 rng(9);
  // Lengths around every vector-width boundary plus a long tail.
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 63, 64, 65, 400, 1001}) {
    CAPTURE(n);
    std::vector<float> f(n);
    std::uniform_real_distribution<float> uf(-1.0f, 1.0f);
    for (float& v : f) v = uf(rng);
    if (n > 2) f[n / 2] = -1.5f;  // the max sits at a negative value
    CHECK(wide->abs_max(f.data(), n) == ref.abs_max(f.data(), n));

    const auto x = random_doubles(rng, n), w = random_doubles(rng, n);
    // dot reassociates and fuses, so it is equal up to rounding.
    const double a = wide->dot(x.data(), w.data(), n), b = ref.dot(x.data(), w.data(), n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::fabs(x[i] * w[i]);
    CHECK(std::fabs(a - b) <= 1e-14 * (mag + 1.0));

    // axpy and mul are element-wise and bit-identical.
    auto y1 = random_doubles(rng, n), y2 = y1;
    wide->axpy(0.37, x.data(), y1.data(), n);
    ref.axpy(0.37, x.data(), y2.data(), n);
    CHECK(y1 == y2);
    wide->mul(x.data(), w.data(), y1.data(), n);
    ref.mul(x.data(), w.data(), y2.data(), n);
    CHECK(y1 == y2);
  }
}

TEST_CASE("abs_max handles NaN-free extremes") {
  const simd::KernelTable* tables[] = {&simd::scalar_kernels(), simd::avx2_kernels()};
  for (const simd::KernelTable* k : tables) {
    if (k == nullptr) continue;
    std::vector<float> v(37, 0.0f);
    v[36] = -1.0f;
    CHECK(k->abs_max(v.data(), v.size()) == 1.0f);
  }
}

TEST_CASE("active table is one of the compiled variants") {
  const auto& a = simd::active();
  CHECK((&a == &simd::scalar_kernels() || &a == simd::avx2_kernels()));
  const char* forced = std::getenv("ASRWB_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") CHECK(&a == &simd::scalar_kernels());
}
