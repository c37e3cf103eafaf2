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

#include <Eigen/Sparse>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "rts/mixing.hpp"

namespace rts {

// dx/dt = A x + b with anti-Hermitian A, stepped m times with step h.
struct OdeProblem {
  DenseOperator a;
  StateVector b;
  StateVector x0;
  double h = 0.1;
  int m = 1;
  int pad = 1;

  void validate() const {
    require_square(a, "ode problem");
    require(b.size() == a.rows() && x0.size() == a.rows(),
            "ode problem: b and x0 must match A");
    require(b.allFinite() && x0.allFinite(), "ode problem: b and x0 must be finite");
    require((a + a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10,
            "ode problem: A must be anti-Hermitian");
    require(std::isfinite(h) && h > 0.0, "ode problem: h must be positive");
    require(m >= 1, "ode problem: m must be at least 1");
    require(pad >= 0, "ode problem: pad must be non-negative");
    require(spectral_norm(a) * h <= 1.0 + 1e-12, "ode problem: need ||A h|| <= 1");
  }
};

struct Propagators {
  DenseOperator t;  // sum_{k<=K} z^k / k!
  DenseOperator s;  // sum_{1<=k<=K} z^{k-1} / k!
};

// With `mix` = (k1, p) the orders above k1 carry an extra 1/(1-p).
inline Propagators eval_propagators(const DenseOperator& z, int k,
                                    std::optional<std::pair<int, double>> mix = {}) {
  require_square(z, "eval_propagators");
  require(k >= 1, "eval_propagators: K must be at least 1");
  require(spectral_norm(z) <= 1.0 + 1e-12, "eval_propagators: need ||z|| <= 1");
  int k1 = k;
  double amp = 1.0;
  if (mix) {
    require(mix->first >= 1 && mix->first < k, "eval_propagators: need 1 <= k1 < K");
    require(mix->second >= 0.0 && mix->second <= kMaxMixProbability,
            "p must lie in [0, 1 - 1e-6]");
    k1 = mix->first;
    amp = 1.0 / (1.0 - mix->second);
  }
  const auto n = z.rows();
  Propagators out{DenseOperator::Identity(n, n), DenseOperator::Zero(n, n)};
  DenseOperator pow_prev = DenseOperator::Identity(n, n);  // z^{j-1}/(j-1)!
  for (int j = 1; j <= k; ++j) {
    const double w = j > k1 ? amp : 1.0;
    out.s += w / j * pow_prev;
    pow_prev = (pow_prev * z / static_cast<double>(j)).eval();
    out.t += w * pow_prev;
  }
  return out;
}

// Unit lower-triangular history-state system C x = rhs. Block (i, j) with
// i < m holds order j of step i; (m, 0) is the final state and (m, j >= 1)
// the padding copies.
struct OdeEncoding {
  Eigen::SparseMatrix<Complex, Eigen::RowMajor> matrix;
  StateVector rhs;
  std::map<std::pair<int, int>, Eigen::Index> block_index;
  int d = 0;  // largest block index; there are d + 1 blocks
  int n = 0;
  int m = 0;
  int order = 0;
  int pad = 0;
};

constexpr Eigen::Index kMaxEncodingDimension = 200000;

inline OdeEncoding build_encoding(const OdeProblem& prob, int k,
                                  std::optional<std::pair<int, double>> mix = {}) {
  prob.validate();
  require(k >= 1, "build_encoding: K must be at least 1");
  double coupling = 0.0;
  int k1 = 0;
  if (mix) {
    require(mix->first >= 1 && mix->first < k, "build_encoding: need 1 <= k1 < K");
    require(mix->second >= 0.0 && mix->second <= kMaxMixProbability,
            "p must lie in [0, 1 - 1e-6]");
    k1 = mix->first;
    coupling = mix->second / (1.0 - mix->second);
  }
  OdeEncoding enc;
  enc.n = static_cast<int>(prob.a.rows());
  enc.m = prob.m;
  enc.order = k;
  enc.pad = prob.pad;
  enc.d = prob.m * (k + 1) + prob.pad;
  const Eigen::Index n = enc.n;
  const Eigen::Index dim = (enc.d + 1) * n;
  require(dim <= kMaxEncodingDimension, "build_encoding: system too large");

  for (int i = 0; i < prob.m; ++i)
    for (int j = 0; j <= k; ++j) enc.block_index[{i, j}] = (i * (k + 1) + j) * n;
  for (int j = 0; j <= prob.pad; ++j)
    enc.block_index[{prob.m, j}] = (prob.m * (k + 1) + j) * n;

  const DenseOperator ah = prob.a * prob.h;
  std::vector<Eigen::Triplet<Complex>> trip;
  auto put_block = [&](int row_block, int col_block, const DenseOperator& blk) {
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c)
        if (blk(r, c) != Complex(0.0))
          trip.emplace_back(row_block * n + r, col_block * n + c, blk(r, c));
  };
  auto put_identity = [&](int row_block, int col_block, double w) {
    for (Eigen::Index r = 0; r < n; ++r)
      trip.emplace_back(row_block * n + r, col_block * n + r, Complex(w));
  };
  for (int blk = 0; blk <= enc.d; ++blk) put_identity(blk, blk, 1.0);
  for (int i = 0; i < prob.m; ++i) {
    const int base = i * (k + 1);
    for (int j = 1; j <= k; ++j) put_block(base + j, base + j - 1, -ah / j);
    if (mix) put_block(base + k1 + 1, base + k1, -coupling * ah / (k1 + 1));
    for (int j = 0; j <= k; ++j) put_identity(base + k + 1, base + j, -1.0);
  }
  for (int blk = enc.d - prob.pad + 1; blk <= enc.d; ++blk)
    put_identity(blk, blk - 1, -1.0);

  enc.matrix.resize(dim, dim);
  enc.matrix.setFromTriplets(trip.begin(), trip.end());
  enc.matrix.makeCompressed();
  enc.rhs = StateVector::Zero(dim);
  enc.rhs.head(n) = prob.x0;
  for (int i = 0; i < prob.m; ++i)
    enc.rhs.segment((i * (k + 1) + 1) * n, n) = prob.h * prob.b;
  return enc;
}

// Forward substitution; the encoding is lower triangular by construction.
inline StateVector solve_encoding(const OdeEncoding& enc) {
  const auto& c = enc.matrix;
  require(c.rows() == c.cols() && c.rows() == enc.rhs.size(),
          "solve_encoding: dimension mismatch");
  StateVector x(c.rows());
  for (Eigen::Index r = 0; r < c.rows(); ++r) {
    Complex acc = enc.rhs(r);
    Complex diag = 0.0;
    for (Eigen::SparseMatrix<Complex, Eigen::RowMajor>::InnerIterator it(c, r); it; ++it) {
      if (it.col() < r) {
        acc -= it.value() * x(it.col());
      } else if (it.col() == r) {
        diag = it.value();
      } else {
        require(it.value() == Complex(0.0), "solve_encoding: matrix is not lower triangular");
      }
    }
    require(std::abs(diag) > 0.0, "solve_encoding: singular diagonal");
    x(r) = acc / diag;
  }
  const double res = (c * x - enc.rhs).norm();
  require(res <= 1e-11 * std::max(1.0, enc.rhs.norm()),
          "solve_encoding: residual check failed");
  return x;
}

// State after j steps.
inline StateVector extract_state(const OdeEncoding& enc, const StateVector& x, int j) {
  require(j >= 0 && j <= enc.m, "extract_state: step out of range");
  return x.segment(static_cast<Eigen::Index>(j) * (enc.order + 1) * enc.n, enc.n);
}

// e^{At} x0 + (e^{At} - 1) A^{-1} b through the eigendecomposition of the
// Hermitian matrix iA.
inline StateVector reference_solution(const OdeProblem& prob, double t) {
  prob.validate();
  require(std::isfinite(t) && t >= 0.0, "reference_solution: t must be non-negative");
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(Complex(0.0, 1.0) * prob.a);
  const DenseOperator& v = es.eigenvectors();
  const StateVector c0 = v.adjoint() * prob.x0;
  const StateVector cb = v.adjoint() * prob.b;
  StateVector out(prob.x0.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double mu = -es.eigenvalues()(i);  // A v = i mu v
    const double th = mu * t;
    const Complex e = std::polar(1.0, th);
    Complex phi;  // (e^{i mu t} - 1) / (i mu)
    if (std::abs(th) < 1e-8) {
      phi = t * (1.0 + Complex(0.0, th) / 2.0 - th * th / 6.0);
    } else {
      const double sh = std::sin(th / 2.0);
      phi = Complex(-2.0 * sh * sh, std::sin(th)) / Complex(0.0, mu);
    }
    out(i) = e * c0(i) + phi * cb(i);
  }
  return v * out;
}

struct OdeBounds {
  double kappa_v = 0.0;
  double c_j = 0.0;
  double delta1 = 0.0;
  double delta_m = 0.0;
  double epsilon = 0.0;
  bool defective = false;
};

inline double eigenvector_condition(const DenseOperator& a, bool* defective) {
  Eigen::ComplexEigenSolver<DenseOperator> es(a);
  DenseOperator v = es.eigenvectors();
  for (Eigen::Index c = 0; c < v.cols(); ++c) v.col(c).normalize();
  Eigen::JacobiSVD<DenseOperator> svd(v);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double kappa = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (defective) *defective = !(kappa <= 1e12);
  return kappa;
}

inline OdeBounds ode_bounds_from_constants(double kappa_v, double x_norm,
                                           double b_norm, int m, double h,
                                           int j, int k1, int k2, double p) {
  require(k1 >= 1 && k2 > k1, "k2 must exceed k1");
  require(j >= 1 && j <= m, "j must lie in [1, m]");
  require(p >= 0.0 && p <= kMaxMixProbability, "p must lie in [0, 1 - 1e-6]");
  OdeBounds b;
  b.kappa_v = kappa_v;
  b.c_j = 2.8 * kappa_v * j * (x_norm + m * h * b_norm);
  b.delta1 = b.c_j * std::exp(-log_factorial(k1 + 1));
  b.delta_m = b.c_j * std::exp(-log_factorial(k2 + 1));
  b.epsilon = std::max(8.0 * b.delta_m, 4.0 / (1.0 - p) * b.delta1 * b.delta1);
  return b;
}

// kappa_V is the eigenvector condition number of A (C itself is unit
// triangular and never diagonalizable unless it is the identity).
inline OdeBounds ode_constants(const OdeEncoding& enc, const OdeProblem& prob,
                               int j, int k1, int k2, double p) {
  prob.validate();
  require(enc.n == prob.a.rows() && enc.m == prob.m,
          "ode_constants: encoding does not match the problem");
  bool defective = false;
  const double kappa = eigenvector_condition(prob.a, &defective);
  OdeBounds b = ode_bounds_from_constants(kappa, prob.x0.norm(), prob.b.norm(),
                                          prob.m, prob.h, j, k1, k2, p);
  b.defective = defective;
  return b;
}

struct OdeVerdict {
  OdeBounds bounds;
  double measured = 0.0;   // |x_mix(jh) - x(jh)|
  double mix_vs_plain = 0.0;  // |x_mix - x_plain_k2|
  double encoding_vs_recursion = 0.0;
  bool holds = false;
};

inline OdeVerdict verify_ode_mixing_bound(const OdeProblem& prob, int k1, int k2,
                                    double p, int j) {
  prob.validate();
  require(k1 >= 1 && k2 > k1, "k2 must exceed k1");
  require(j >= 1 && j <= prob.m, "j must lie in [1, m]");
  const OdeEncoding e1 = build_encoding(prob, k1);
  const OdeEncoding e2 = build_encoding(prob, k2, std::make_pair(k1, p));
  const OdeEncoding ep = build_encoding(prob, k2);
  const StateVector x1 = extract_state(e1, solve_encoding(e1), j);
  const StateVector x2 = extract_state(e2, solve_encoding(e2), j);
  const StateVector xp = extract_state(ep, solve_encoding(ep), j);
  const StateVector mixed = p * x1 + (1.0 - p) * x2;

  // Direct recursion x <- T x + h S b with the modified propagators.
  const DenseOperator z = prob.a * prob.h;
  const Propagators pr = eval_propagators(z, k2, std::make_pair(k1, p));
  StateVector xr = prob.x0;
  for (int i = 0; i < j; ++i) xr = pr.t * xr + prob.h * (pr.s * prob.b);

  OdeVerdict v;
  v.bounds = ode_constants(e1, prob, j, k1, k2, p);
  v.measured = (mixed - reference_solution(prob, j * prob.h)).norm();
  v.mix_vs_plain = (mixed - xp).norm();
  v.encoding_vs_recursion = (x2 - xr).norm();
  v.holds = v.measured <= v.bounds.epsilon;
  return v;
}

// Random problem with ||A h|| = ah_norm and unit-norm x0, b drawn from a
// seeded Gaussian generator.
inline OdeProblem random_ode_problem(int n, int m, double h, double ah_norm,
                                     std::uint64_t seed, int pad = 1) {
  require(n >= 1 && n <= 64, "random ode: n must lie in [1, 64]");
  require(ah_norm > 0.0 && ah_norm <= 1.0, "random ode: need 0 < ||A h|| <= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto cplx = [&] { return Complex(g(rng), g(rng)); };
  DenseOperator x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = cplx();
  DenseOperator a = 0.5 * (x - x.adjoint());
  a *= ah_norm / (h * spectral_norm(a));
  StateVector x0(n), b(n);
  for (int i = 0; i < n; ++i) {
    x0(i) = cplx();
    b(i) = cplx();
  }
  OdeProblem prob{a, b / b.norm(), x0 / x0.norm(), h, m, pad};
  prob.validate();
  return prob;
}

}  // namespace rts
