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

#include <cstdlib>
#include <string_view>

#include "asrwb/simd/kernels.hpp"

namespace asrwb::simd {

#if defined(ASRWB_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(ASRWB_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* force = std::getenv("ASRWB_SIMD");
    if (force != nullptr && std::string_view(force) == "scalar")
      return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace asrwb::simd
