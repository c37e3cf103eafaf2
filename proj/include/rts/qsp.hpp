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

#include <functional>
#include <numbers>
#include <optional>

#include "rts/mixing.hpp"

namespace rts {

struct JacobiAngerSpec {
  double t = 1.0;
  int k1 = 1;
  int k2 = 2;
  double p = 0.0;

  void validate() const {
    require(std::isfinite(t) && std::abs(t) <= 100.0, "|t| must be at most 100");
    require(k1 >= 0, "k1 must be non-negative");
    require(k2 > k1, "k2 must exceed k1");
    require(k2 <= 300, "k2 must be at most 300");
    require(std::isfinite(p) && p >= 0.0 && p <= kMaxMixProbability,
            "p must lie in [0, 1 - 1e-6]");
  }
};

enum class SeriesVariant { kV1, kV2, kMix };

// Truncated Chebyshev expansion of exp(-i lambda t):
// J_0(t) + 2 sum_k (-i)^k J_k(t) T_k(lambda), orders above k1 amplified by
// 1/(1-p) in the V2 branch.
inline Complex eval_jacobi_anger(double lambda, const JacobiAngerSpec& spec,
                                 SeriesVariant variant) {
  spec.validate();
  require(std::isfinite(lambda) && std::abs(lambda) <= 1.0,
          "eval_jacobi_anger: |lambda| must be at most 1");
  if (variant == SeriesVariant::kMix) {
    return spec.p * eval_jacobi_anger(lambda, spec, SeriesVariant::kV1) +
           (1.0 - spec.p) * eval_jacobi_anger(lambda, spec, SeriesVariant::kV2);
  }
  const int k_max = variant == SeriesVariant::kV1 ? spec.k1 : spec.k2;
  const double amp = variant == SeriesVariant::kV1 ? 1.0 : 1.0 / (1.0 - spec.p);
  const auto j = bessel_j_sequence(spec.t, k_max);
  const auto tk = chebyshev_t_sequence(k_max, lambda);
  static constexpr Complex kPhase[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  Complex sum = j[0];
  for (int k = 1; k <= k_max; ++k) {
    const double w = k > spec.k1 ? 2.0 * amp : 2.0;
    sum += w * kPhase[k % 4] * j[k] * tk[k];
  }
  return sum;
}

struct QspBoundSet {
  double delta1 = 0.0;
  double delta_m = 0.0;
  double eps1_v1 = 0.0, eps2_v1 = 0.0;
  double eps1_v2 = 0.0, eps2_v2 = 0.0;
  double eps1_vm = 0.0, eps2_vm = 0.0;
  double epsilon = 0.0;
  double xi = 0.0;
};

// 4 t^K / (2^K K!), the Chebyshev truncation error at order K.
inline double jacobi_anger_delta(double t, int k) {
  if (k == 0) return 4.0;
  return 4.0 * std::exp(k * std::log(std::abs(t) / 2.0) - log_factorial(k));
}

inline QspBoundSet qsp_hs_bounds(const JacobiAngerSpec& spec) {
  spec.validate();
  require(spec.t > 0.0, "t must be positive");
  require(spec.k1 >= 1, "k1 must be at least 1");
  require(spec.t / (2.0 * spec.k1) <= 0.5,
          "bound needs t / (2 k1) <= 1/2");
  QspBoundSet b;
  b.delta1 = jacobi_anger_delta(spec.t, spec.k1);
  b.delta_m = jacobi_anger_delta(spec.t, spec.k2);
  const double ratio = spec.p / (1.0 - spec.p);
  b.eps1_v1 = b.delta1;
  b.eps1_v2 = ratio * b.delta1;
  b.eps2_v2 = 5.0 * ratio * b.delta1;
  b.eps1_vm = b.delta_m;
  b.epsilon = std::max(28.0 * b.delta1, 8.0 * std::sqrt(b.delta_m));
  b.xi = 4.0 * spec.p * std::sqrt(b.delta1);
  return b;
}

struct ScanResult {
  double max_deviation = 0.0;
  double argmax = 0.0;
};

// max |approx - target| on [lo, hi]: uniform grid, then golden-section
// refinement in the bracket around the best grid point.
inline ScanResult scan_max_deviation(
    const std::function<Complex(double)>& approx,
    const std::function<Complex(double)>& target, int grid_points = 4097,
    double lo = -1.0, double hi = 1.0) {
  require(grid_points >= 101, "scan_max_deviation: need at least 101 points");
  require(lo < hi, "scan_max_deviation: empty interval");
  auto dev = [&](double x) {
    const double d = std::abs(approx(x) - target(x));
    require(std::isfinite(d), "scan_max_deviation: non-finite evaluation");
    return d;
  };
  const double step = (hi - lo) / (grid_points - 1);
  ScanResult best{-1.0, lo};
  int best_i = 0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = i == grid_points - 1 ? hi : lo + i * step;
    const double d = dev(x);
    if (d > best.max_deviation) {
      best = {d, x};
      best_i = i;
    }
  }
  double a = std::max(lo, lo + (best_i - 1) * step);
  double b = std::min(hi, lo + (best_i + 1) * step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = dev(c), fd = dev(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = dev(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = dev(d);
    }
  }
  if (fc > best.max_deviation) best = {fc, c};
  if (fd > best.max_deviation) best = {fd, d};
  return best;
}

// Odd Chebyshev approximation of erf(gamma x) built from the generating
// function of exp(-gamma^2 x^2), which involves modified Bessel I_k.
class ErfPolynomial {
 public:
  ErfPolynomial(double gamma, int k, std::optional<std::pair<int, double>> mix = {})
      : k_(k) {
    require(std::isfinite(gamma) && gamma > 0.0, "erf polynomial: gamma must be positive");
    require(k >= 1 && k % 2 == 1, "erf polynomial: degree must be odd and positive");
    const int n = (k - 1) / 2;
    const double z = gamma * gamma / 2.0;
    const auto ik = bessel_i_scaled_sequence(z, n);
    const double pre = 2.0 * gamma / std::sqrt(std::numbers::pi);
    double amp = 1.0;
    int j_from = n + 1;
    if (mix) {
      const auto [k1, p] = *mix;
      require(k1 >= 1 && k1 % 2 == 1 && k1 < k, "erf polynomial: k1 must be odd and below k");
      require(p >= 0.0 && p <= kMaxMixProbability, "p must lie in [0, 1 - 1e-6]");
      amp = 1.0 / (1.0 - p);
      j_from = (k1 + 1) / 2;
    }
    // coef_[m] multiplies T_m, odd m only.
    coef_.assign(static_cast<std::size_t>(k) + 1, 0.0);
    coef_[1] = pre * ik[0];
    for (int j = 1; j <= n; ++j) {
      const double w = pre * ik[j] * (j % 2 ? -1.0 : 1.0) * (j >= j_from ? amp : 1.0);
      coef_[2 * j + 1] += w / (2 * j + 1);
      coef_[2 * j - 1] -= w / (2 * j - 1);
    }
  }

  double operator()(double x) const {
    const auto t = chebyshev_t_sequence(k_, x);
    double s = 0.0;
    for (int m = 1; m <= k_; m += 2) s += coef_[m] * t[m];
    return s;
  }

  int degree() const { return k_; }

 private:
  int k_;
  std::vector<double> coef_;
};

inline double eval_erf_poly(double x, double gamma, int k,
                            std::optional<std::pair<int, double>> mix = {}) {
  return ErfPolynomial(gamma, k, mix)(x);
}

struct UsaSpec {
  double gamma_cap = 0.25;  // spectral gap parameter Gamma
  double delta = 1e-3;
  double delta_prime = 0.0;
  int k1 = 11;
  int k2 = 21;
  double p = 0.0;
};

inline UsaSpec make_usa_spec(double gamma_cap, double delta, int k1, int k2,
                             double p) {
  require(std::isfinite(gamma_cap) && gamma_cap > 0.0 && gamma_cap <= 0.5,
          "Gamma must lie in (0, 1/2]");
  require(std::isfinite(delta) && delta > 0.0 &&
              delta < std::sqrt(2.0 / std::numbers::pi),
          "delta must lie in (0, sqrt(2/pi))");
  require(k1 >= 1 && k1 % 2 == 1, "k1 must be odd and positive");
  require(k2 > k1, "k2 must exceed k1");
  require(k2 % 2 == 1, "k2 must be odd");
  require(std::isfinite(p) && p >= 0.0 && p <= kMaxMixProbability,
          "p must lie in [0, 1 - 1e-6]");
  UsaSpec s{gamma_cap, delta, 0.0, k1, k2, p};
  s.delta_prime =
      1.0 / std::sqrt(std::log(2.0 / (std::numbers::pi * delta * delta)));
  return s;
}

enum class UsaTarget { kIdeal, kPolyK1, kPolyK2, kPolyMix, kPolyPlainK2 };

namespace detail {

struct UsaMap {
  double kappa;  // erf argument scale 1/(sqrt 2 Gamma delta')
  double width;  // 1 + 2 Gamma
};

inline UsaMap usa_map(const UsaSpec& s) {
  return {1.0 / (std::numbers::sqrt2 * s.gamma_cap * s.delta_prime),
          1.0 + 2.0 * s.gamma_cap};
}

}  // namespace detail

// Sum erf((lambda + 2G) k) + erf((2G - lambda) k), exact or through the
// degree-K polynomials evaluated at (lambda +- 2G) / (1 + 2G).
inline double usa_erf_pair(double lambda, const UsaSpec& s, UsaTarget which) {
  require(std::isfinite(lambda) && std::abs(lambda) <= 1.0,
          "usa: |lambda| must be at most 1");
  const auto m = detail::usa_map(s);
  const double up = lambda + 2.0 * s.gamma_cap;
  const double dn = 2.0 * s.gamma_cap - lambda;
  if (which == UsaTarget::kIdeal) {
    return erf_reference(up * m.kappa) + erf_reference(dn * m.kappa);
  }
  const double g = m.kappa * m.width;
  if (which == UsaTarget::kPolyMix) {
    return s.p * usa_erf_pair(lambda, s, UsaTarget::kPolyK1) +
           (1.0 - s.p) * usa_erf_pair(lambda, s, UsaTarget::kPolyK2);
  }
  std::optional<ErfPolynomial> poly;
  if (which == UsaTarget::kPolyK1) poly.emplace(g, s.k1);
  if (which == UsaTarget::kPolyK2) poly.emplace(g, s.k2, std::make_pair(s.k1, s.p));
  if (which == UsaTarget::kPolyPlainK2) poly.emplace(g, s.k2);
  return (*poly)(up / m.width) + (*poly)(dn / m.width);
}

inline double eval_usa_target(double lambda, const UsaSpec& s, UsaTarget which) {
  return lambda / (4.0 * s.gamma_cap) * usa_erf_pair(lambda, s, which);
}

struct UsaBounds {
  double delta1 = 0.0;
  double delta_m = 0.0;
  double epsilon = 0.0;
  double a1_erf = 0.0;
  double a2_erf = 0.0;
  double b_erf = 0.0;
};

// Erf-level truncation error at odd degree K for scale gamma:
// gamma e^{-gamma^2/2}/sqrt(pi) * 4 (gamma^2/2)^n / (2^n n!), n = (K+1)/2.
inline double erf_truncation_bound(double gamma, int k) {
  const double n = (k + 1) / 2.0;
  const double z = gamma * gamma / 2.0;
  return gamma * std::exp(-z) / std::sqrt(std::numbers::pi) * 4.0 *
         std::exp(n * std::log(z) - n * std::numbers::ln2 - log_factorial_real(n));
}

inline double usa_delta(double gamma_cap, int k) {
  const double h = k / 2.0;
  const double g2 = 8.0 * gamma_cap * gamma_cap;
  return 8.0 * gamma_cap * std::exp(-g2) / std::sqrt(std::numbers::pi) * 4.0 *
         std::exp(h * std::log(g2) - h * std::numbers::ln2 - log_factorial_real(h));
}

inline UsaBounds usa_bounds(const UsaSpec& s) {
  UsaBounds b;
  b.delta1 = usa_delta(s.gamma_cap, s.k1);
  b.delta_m = usa_delta(s.gamma_cap, s.k2);
  b.epsilon = std::max(8.0 * b.delta_m, 4.0 / (1.0 - s.p) * b.delta1 * b.delta1);
  const double g = 4.0 * s.gamma_cap;
  b.a1_erf = erf_truncation_bound(g, s.k1 - 1);
  b.a2_erf = s.p / (1.0 - s.p) * b.a1_erf;
  b.b_erf = erf_truncation_bound(g, s.k2 - 1);
  return b;
}

struct UsaDeviations {
  double k1 = 0.0, k2 = 0.0, mix = 0.0, identity = 0.0;
};

// Deviations on the linear region |lambda| <= Gamma, rescaled by 2G/|lambda|;
// that is half the error of the erf pair. `identity` is the unscaled pair
// difference between the mixture and the plain order-k2 composite.
inline UsaDeviations usa_deviations(const UsaSpec& s, int grid) {
  const auto m = detail::usa_map(s);
  const double g = m.kappa * m.width;
  const ErfPolynomial p1(g, s.k1), p2(g, s.k2, std::make_pair(s.k1, s.p)), plain(g, s.k2);
  auto pair = [&](const ErfPolynomial& q, double x) {
    return q((x + 2.0 * s.gamma_cap) / m.width) + q((2.0 * s.gamma_cap - x) / m.width);
  };
  auto ideal = [&](double x) { return Complex(usa_erf_pair(x, s, UsaTarget::kIdeal)); };
  auto k1 = [&](double x) { return Complex(pair(p1, x)); };
  auto k2 = [&](double x) { return Complex(pair(p2, x)); };
  auto mix = [&](double x) { return Complex(s.p * pair(p1, x) + (1.0 - s.p) * pair(p2, x)); };
  auto flat = [&](double x) { return Complex(pair(plain, x)); };
  auto scan = [&](const std::function<Complex(double)>& a,
                  const std::function<Complex(double)>& b) {
    return scan_max_deviation(a, b, grid, -s.gamma_cap, s.gamma_cap).max_deviation;
  };
  return {0.5 * scan(k1, ideal), 0.5 * scan(k2, ideal), 0.5 * scan(mix, ideal), scan(mix, flat)};
}

}  // namespace rts
