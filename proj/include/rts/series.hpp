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

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "rts/error.hpp"

namespace rts {

inline double log_factorial(int n) {
  require(n >= 0, "log_factorial: n must be non-negative");
  if (n < 2) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0);
}

// ln Γ(x + 1) for real x >= 0; used where half-integer factorials appear.
inline double log_factorial_real(double x) {
  require(x >= 0.0, "log_factorial_real: x must be non-negative");
  return std::lgamma(x + 1.0);
}

namespace detail {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

}  // namespace detail

// J_0(t) .. J_kmax(t) by Miller's backward recurrence, normalized with
// J_0 + 2 sum J_2k = 1.
inline std::vector<double> bessel_j_sequence(double t, int k_max) {
  require(std::isfinite(t) && std::abs(t) <= 100.0,
          "bessel_j_sequence: |t| must be at most 100");
  require(k_max >= 0 && k_max <= 300,
          "bessel_j_sequence: k_max must lie in [0, 300]");
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (t == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double x = std::abs(t);
  int start =
      k_max + static_cast<int>(std::ceil(std::max(20.0, 1.5 * x)));
  if (start % 2 != 0) ++start;

  double above = 0.0;  // J_{k+1}
  double cur = 1e-30;  // J_k
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= k_max) out[k] = cur;
    if (k % 2 == 0) norm += 2.0 * cur;
    const double below = (2.0 * k / x) * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > detail::kRescaleAbove) {
      cur *= detail::kRescaleBy;
      above *= detail::kRescaleBy;
      norm *= detail::kRescaleBy;
      for (int j = k; j <= k_max; ++j) out[j] *= detail::kRescaleBy;
    }
  }
  out[0] = cur;
  norm += cur;
  for (int k = 0; k <= k_max; ++k) {
    out[k] /= norm;
    if (t < 0.0 && k % 2 == 1) out[k] = -out[k];
  }
  return out;
}

// e^{-z} I_0(z) .. e^{-z} I_kmax(z) for z >= 0, normalized with
// I_0 + 2 sum I_k = e^z.
inline std::vector<double> bessel_i_scaled_sequence(double z, int k_max) {
  require(std::isfinite(z) && z >= 0.0 && z <= 1e4,
          "bessel_i_scaled_sequence: z must lie in [0, 1e4]");
  require(k_max >= 0 && k_max <= 1000,
          "bessel_i_scaled_sequence: k_max must lie in [0, 1000]");
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (z == 0.0) {
    out[0] = 1.0;
    return out;
  }
  // I_k / I_0 ~ exp(-k^2 / 2z) well below k ~ z, so sqrt(80 z) extra terms
  // puts the start index past exp(-40).
  const int start =
      k_max + 20 + static_cast<int>(std::ceil(std::sqrt(80.0 * z)));
  double above = 0.0;
  double cur = 1e-30;
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= k_max) out[k] = cur;
    norm += 2.0 * cur;
    const double below = (2.0 * k / z) * cur + above;
    above = cur;
    cur = below;
    if (cur > detail::kRescaleAbove) {
      cur *= detail::kRescaleBy;
      above *= detail::kRescaleBy;
      norm *= detail::kRescaleBy;
      for (int j = k; j <= k_max; ++j) out[j] *= detail::kRescaleBy;
    }
  }
  out[0] = cur;
  norm += cur;
  for (double& v : out) v /= norm;
  return out;
}

inline std::vector<double> chebyshev_t_sequence(int k_max, double x) {
  require(k_max >= 0, "chebyshev_t: k must be non-negative");
  require(std::isfinite(x) && std::abs(x) <= 1.0,
          "chebyshev_t: |x| must be at most 1");
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1);
  out[0] = 1.0;
  if (k_max >= 1) out[1] = x;
  for (int k = 2; k <= k_max; ++k) out[k] = 2.0 * x * out[k - 1] - out[k - 2];
  return out;
}

inline double chebyshev_t(int k, double x) {
  return chebyshev_t_sequence(k, x).back();
}

enum class TailMode { kExact, kClosedBound };

// c^n / n! evaluated in the log domain.
inline double taylor_term(double c, int n) {
  if (n == 0) return 1.0;
  if (c == 0.0) return 0.0;
  return std::exp(n * std::log(c) - log_factorial(n));
}

// sum_{k > K} c^k / k!, or the closed form 2 c^{K+1} / (K+1)!.
inline double taylor_tail(double c, int k, TailMode mode) {
  require(std::isfinite(c) && c > 0.0, "taylor_tail: c must be positive");
  require(k >= 0, "taylor_tail: K must be non-negative");
  if (mode == TailMode::kClosedBound) {
    require(c / (k + 2) <= 0.5,
            "taylor_tail: closed bound needs c / (K + 2) <= 1/2");
    return 2.0 * taylor_term(c, k + 1);
  }
  double term = taylor_term(c, k + 1);
  double sum = 0.0;
  for (int n = k + 1;; ++n) {
    sum += term;
    term *= c / (n + 1);
    if (n + 1 > c && term <= 1e-17 * sum) break;
    if (term == 0.0) break;
  }
  return sum;
}

inline double erf_reference(double x) {
  require(std::isfinite(x), "erf_reference: x must be finite");
  return std::erf(x);
}

// Coefficients alpha_0 .. alpha_K of a truncated power series in one
// operator variable.
class SeriesCoefficients {
 public:
  SeriesCoefficients() : values_{1.0} {}
  explicit SeriesCoefficients(std::vector<std::complex<double>> values)
      : values_(std::move(values)) {
    require(!values_.empty(), "SeriesCoefficients: need at least alpha_0");
    for (const auto& v : values_) {
      require(std::isfinite(v.real()) && std::isfinite(v.imag()),
              "SeriesCoefficients: coefficients must be finite");
    }
  }

  const std::vector<std::complex<double>>& values() const { return values_; }
  int truncation_order() const { return static_cast<int>(values_.size()) - 1; }
  std::complex<double> operator[](int k) const { return values_[k]; }

 private:
  std::vector<std::complex<double>> values_;
};

// scale^k / k! for k = 0..K; e.g. scale = -i tau gives exp(-i tau H).
inline SeriesCoefficients exponential_coefficients(std::complex<double> scale,
                                                   int k) {
  require(k >= 0, "exponential_coefficients: K must be non-negative");
  std::vector<std::complex<double>> v(static_cast<std::size_t>(k) + 1);
  v[0] = 1.0;
  for (int n = 1; n <= k; ++n) v[n] = v[n - 1] * scale / static_cast<double>(n);
  return SeriesCoefficients(std::move(v));
}

}  // namespace rts
