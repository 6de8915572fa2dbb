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

// Reference implementations used only by tests. Each one is written from the
// definition, deliberately without sharing code or structure with src/.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace asrwb::oracle {

struct Segment {
  std::size_t start, end;
  bool operator==(const Segment&) const = default;
};

/// Sample-level definition: sample i is speech iff some window k with
/// k <= i / w <= k + hangover has a peak strictly above the threshold.
/// Segments are the maximal runs of speech samples.
inline std::vector<Segment> vad_reference(const std::vector<float>& x, std::size_t w,
                                          float threshold, std::size_t hangover) {
  const std::size_t n = x.size();
  const std::size_t windows = (n + w - 1) / w;
  std::vector<bool> loud(windows, false);
  for (std::size_t k = 0; k < windows; ++k)
    for (std::size_t i = k * w; i < std::min(n, (k + 1) * w); ++i)
      if (std::fabs(x[i]) > threshold) loud[k] = true;

  std::vector<bool> speech(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i / w;
    for (std::size_t back = 0; back <= hangover && back <= j; ++back)
      if (loud[j - back]) speech[i] = true;
  }
  std::vector<Segment> out;
  for (std::size_t i = 0; i < n;) {
    if (!speech[i]) {
      ++i;
      continue;
    }
    std::size_t e = i;
    while (e < n && speech[e]) ++e;
    out.push_back({i, e});
    i = e;
  }
  return out;
}

struct Path {
  std::vector<int> positions;  // index into the chain, per frame
  double score = -std::numeric_limits<double>::infinity();
};

/// Enumerates every monotonic path (stay or advance by one, start at chain
/// position 0, end at the last) and returns the best. `score(t, j)` is the
/// frame-t log score of chain position j. Returns an empty path when T < S.
inline Path best_monotonic_path(std::size_t T, std::size_t S,
                                const std::function<double(std::size_t, std::size_t)>& score) {
  Path best;
  if (T < S || S == 0) return best;
  // Choose which of the T-1 transitions advance: exactly S-1 of them.
  std::vector<int> pos(T);
  const std::uint32_t limit = 1u << (T - 1);
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != S - 1) continue;
    pos[0] = 0;
    for (std::size_t t = 1; t < T; ++t) pos[t] = pos[t - 1] + ((mask >> (t - 1)) & 1u);
    double s = 0.0;
    for (std::size_t t = 0; t < T; ++t) s += score(t, static_cast<std::size_t>(pos[t]));
    if (s > best.score) {
      best.score = s;
      best.positions = pos;
    }
  }
  return best;
}

/// floor(len * dst / src) in exact integer arithmetic.
inline std::uint64_t decimation_length(std::uint64_t len, std::uint64_t src, std::uint64_t dst) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(len) * dst) / src);
}

/// |X[k]|^2 of a naive complex DFT.
inline std::vector<double> power_spectrum(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n / 2 + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t)
      acc += x[t] * std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(t) / double(n));
    out[k] = std::norm(acc);
  }
  return out;
}

/// 2x2 symmetric inverse by the adjugate formula.
inline std::array<double, 4> inverse2x2(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  return {d / det, -b / det, -c / det, a / det};
}

/// Central differences of f around x, one coordinate at a time.
inline std::vector<double> central_differences(std::vector<double> x,
                                               const std::function<double(const std::vector<double>&)>& f,
                                               double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace asrwb::oracle
