// Copyright 2026 The rts Authors
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
#include <cmath>
#include <complex>
#include <functional>

#include "rts/error.hpp"

namespace rts {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline bool all_finite(const DenseOperator& m) { return m.allFinite(); }

inline void require_square(const DenseOperator& m, const char* what) {
  require(m.rows() == m.cols() && m.rows() > 0,
          std::string(what) + ": operator must be square and non-empty");
  require(m.allFinite(), std::string(what) + ": operator must be finite");
}

inline bool is_hermitian(const DenseOperator& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline double spectral_norm(const DenseOperator& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<DenseOperator> svd(m);
  return svd.singularValues()(0);
}

inline bool is_unitary(const DenseOperator& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const auto id = DenseOperator::Identity(m.rows(), m.cols());
  return spectral_norm(m.adjoint() * m - id) <= tol;
}

// f(H) for Hermitian H through its eigendecomposition.
inline DenseOperator hermitian_function(
    const DenseOperator& h, const std::function<Complex(double)>& f) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
  const DenseOperator& v = es.eigenvectors();
  Eigen::VectorXcd d(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) d(i) = f(es.eigenvalues()(i));
  return v * d.asDiagonal() * v.adjoint();
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline DenseOperator pure_state(const StateVector& psi) {
  const double n = psi.norm();
  require(n > 0.0, "pure_state: zero vector");
  const StateVector u = psi / n;
  return u * u.adjoint();
}

}  // namespace rts
