// Copyright 2026 The blgi-sim Authors
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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blgi/density_matrix.hpp"

namespace blgi::sim {

namespace detail {
inline Eigen::MatrixXcd to_eigen(const DensityMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      m(r, c) = rho(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
  }
  return m;
}
}  // namespace detail

inline double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(rho),
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Checks the three density-matrix invariants: Hermiticity (1e-12),
/// unit trace (1e-12), positivity (min eigenvalue >= -1e-10).
inline bool is_valid_state(const DensityMatrix& rho, double herm_tol = 1e-12,
                           double trace_tol = 1e-12, double psd_tol = 1e-10) {
  return rho.is_hermitian(herm_tol) &&
         std::abs(rho.trace() - cplx(1.0, 0.0)) <= trace_tol &&
         min_eigenvalue(rho) >= -psd_tol;
}

/// Wootters concurrence of a two-qubit state: 0 for separable states,
/// 1 for Bell states.
inline double concurrence(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) {
    throw std::invalid_argument("concurrence: needs a two-qubit state");
  }
  Eigen::MatrixXcd m = detail::to_eigen(rho);
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();  // sigma_y (x) sigma_y
  yy(0, 3) = -1, yy(1, 2) = 1, yy(2, 1) = 1, yy(3, 0) = -1;
  const Eigen::Matrix4cd spin_flipped = yy * m.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(m * spin_flipped, false);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    lam[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace blgi::sim
