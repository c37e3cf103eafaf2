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

#include <utility>

#include "rts/linalg.hpp"
#include "rts/series.hpp"

namespace rts {

// Degenerate mixtures (p -> 1) make the amplified branch blow up.
constexpr double kMaxMixProbability = 1.0 - 1e-6;

struct MixParameters {
  int k1 = 0;
  int k2 = 1;
  double p = 0.0;

  void validate() const {
    require(k1 >= 0, "k1 must be non-negative");
    require(k2 > k1, "k2 must exceed k1");
    require(std::isfinite(p) && p >= 0.0, "p must lie in [0, 1)");
    require(p <= kMaxMixProbability, "p must not exceed 1 - 1e-6");
  }
};

struct SeriesMixSpec {
  SeriesCoefficients base;
  MixParameters mix;

  void validate() const {
    mix.validate();
    require(base.truncation_order() >= mix.k2,
            "base series must reach order k2");
  }
};

// F1 keeps orders 0..k1; F2 keeps 0..k2 with orders above k1 scaled by
// 1/(1-p), so p F1 + (1-p) F2 is the plain k2 truncation.
inline std::pair<SeriesCoefficients, SeriesCoefficients> modified_coefficients(
    const SeriesMixSpec& spec) {
  spec.validate();
  const auto& a = spec.base.values();
  std::vector<Complex> f1(a.begin(), a.begin() + spec.mix.k1 + 1);
  std::vector<Complex> f2(a.begin(), a.begin() + spec.mix.k2 + 1);
  const double amp = 1.0 / (1.0 - spec.mix.p);
  for (int k = spec.mix.k1 + 1; k <= spec.mix.k2; ++k) f2[k] *= amp;
  return {SeriesCoefficients(std::move(f1)), SeriesCoefficients(std::move(f2))};
}

inline DenseOperator matrix_polynomial(const SeriesCoefficients& c,
                                       const DenseOperator& h) {
  require_square(h, "matrix_polynomial");
  const auto n = h.rows();
  const int k = c.truncation_order();
  DenseOperator out = c[k] * DenseOperator::Identity(n, n);
  for (int j = k - 1; j >= 0; --j) {
    out = out * h;
    out.diagonal().array() += c[j];
  }
  return out;
}

inline double mixing_error_bound(double a1, double a2, double b, double p) {
  require(a1 >= 0.0 && a2 >= 0.0 && b >= 0.0,
          "mixing_error_bound: errors must be non-negative");
  require(p >= 0.0 && p <= 1.0, "mixing_error_bound: p must lie in [0, 1]");
  return 4.0 * b + 2.0 * p * a1 * a1 + 2.0 * (1.0 - p) * a2 * a2;
}

inline void require_density(const DenseOperator& rho, const char* what) {
  require_square(rho, what);
  require(is_hermitian(rho, 1e-10), std::string(what) + ": rho must be Hermitian");
  require(std::abs(rho.trace() - Complex(1.0)) <= 1e-10,
          std::string(what) + ": rho must have unit trace");
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(rho, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -1e-10,
          std::string(what) + ": rho must be positive semidefinite");
}

inline DenseOperator apply_mixing_channel(const DenseOperator& v1,
                                          const DenseOperator& v2, double p,
                                          const DenseOperator& rho,
                                          bool normalize) {
  require_square(v1, "apply_mixing_channel");
  require_square(v2, "apply_mixing_channel");
  require(v1.rows() == v2.rows() && v1.rows() == rho.rows(),
          "apply_mixing_channel: dimension mismatch");
  require(p >= 0.0 && p <= 1.0, "apply_mixing_channel: p must lie in [0, 1]");
  require_density(rho, "apply_mixing_channel");
  DenseOperator out =
      p * v1 * rho * v1.adjoint() + (1.0 - p) * v2 * rho * v2.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  if (normalize) {
    const double tr = out.trace().real();
    require(tr > 1e-14, "apply_mixing_channel: output has vanishing trace");
    out /= tr;
  }
  return out;
}

inline double trace_distance(const DenseOperator& r1, const DenseOperator& r2) {
  require_square(r1, "trace_distance");
  require(r1.rows() == r2.rows() && r1.cols() == r2.cols(),
          "trace_distance: dimension mismatch");
  require(is_hermitian(r1, 1e-10) && is_hermitian(r2, 1e-10),
          "trace_distance: inputs must be Hermitian");
  Eigen::JacobiSVD<DenseOperator> svd(r1 - r2);
  return svd.singularValues().sum();
}

struct MixingVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;
  bool holds = false;
  // Set when rhs / 2 > 1; the lemma is vacuous there.
  bool epsilon_prime_exceeds_one = false;
};

inline MixingVerdict verify_mixing_lemma(const DenseOperator& v1,
                                         const DenseOperator& v2,
                                         const DenseOperator& u, double p,
                                         const DenseOperator& rho) {
  require_square(u, "verify_mixing_lemma");
  require(is_unitary(u, 1e-10), "verify_mixing_lemma: target must be unitary");
  require_density(rho, "verify_mixing_lemma");
  require(std::abs((rho * rho).trace().real() - 1.0) <= 1e-8,
          "verify_mixing_lemma: rho must be a pure state");
  MixingVerdict v;
  v.a1 = spectral_norm(v1 - u);
  v.a2 = spectral_norm(v2 - u);
  v.b = spectral_norm(p * v1 + (1.0 - p) * v2 - u);
  v.rhs = mixing_error_bound(v.a1, v.a2, v.b, p);
  const DenseOperator target = u * rho * u.adjoint();
  const DenseOperator mixed = apply_mixing_channel(v1, v2, p, rho, true);
  v.lhs = trace_distance(mixed, 0.5 * (target + target.adjoint()));
  v.holds = v.lhs <= v.rhs + 1e-10;
  v.epsilon_prime_exceeds_one = v.rhs / 2.0 > 1.0;
  return v;
}

}  // namespace rts
