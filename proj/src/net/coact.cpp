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

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "asrwb/error.hpp"
#include "asrwb/net/network.hpp"
#include "asrwb/simd/kernels.hpp"

namespace asrwb::net {

CoactStats coact_stats(const Matrix& activations, double ridge) {
  if (activations.rows() == 0 || activations.cols() == 0)
    throw Error(Errc::kInvalidArgument, "co-activation statistics need at least one row");
  if (!(ridge > 0.0)) throw Error(Errc::kInvalidArgument, "ridge must be positive");

  const std::size_t n = activations.rows(), h = activations.cols();
  CoactStats out;
  out.mean = column_means(activations);

  Matrix cov(h, h);
  Vector centered(h);
  for (std::size_t r = 0; r < n; ++r) {
    const auto a = activations.row(r);
    for (std::size_t i = 0; i < h; ++i) centered[i] = a[i] - out.mean[i];
    for (std::size_t i = 0; i < h; ++i) simd::axpy(centered[i], centered, cov.row(i));
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd c(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j)
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          0.5 * (cov(i, j) + cov(j, i)) * inv_n + (i == j ? ridge : 0.0);

  // SPD by construction (PSD sample covariance + ridge), so LLT is safe.
  const Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::kInvalidArgument, "covariance is not positive definite");
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(c.rows(), c.cols()));

  out.precision = Matrix(h, h);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      out.precision(i, j) = 0.5 * (inv(ii, jj) + inv(jj, ii));
    }
  return out;
}

}  // namespace asrwb::net
