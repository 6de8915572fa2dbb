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

#include "asrwb/net/matrix.hpp"

#include <algorithm>

#include "asrwb/error.hpp"
#include "asrwb/simd/kernels.hpp"

namespace asrwb::net {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols())
      throw Error(Errc::kShapeMismatch, "ragged rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Vector column_means(const Matrix& m) {
  Vector mean(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) simd::axpy(1.0, m.row(r), mean);
  const double inv = m.rows() > 0 ? 1.0 / static_cast<double>(m.rows()) : 0.0;
  for (double& v : mean) v *= inv;
  return mean;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), m.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = m.row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace asrwb::net
