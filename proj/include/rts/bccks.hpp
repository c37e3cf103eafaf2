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

#include <cstdint>
#include <numbers>

#include "rts/mixing.hpp"
#include "rts/pauli.hpp"

namespace rts {

struct SegmentPlan {
  double alpha_sum = 0.0;
  double t = 0.0;
  long r = 0;
  double tau = 0.0;
};

// Smallest r with alpha_sum * t / r <= ln 2.
inline SegmentPlan plan_segments(double alpha_sum, double t) {
  require(std::isfinite(alpha_sum) && alpha_sum > 0.0,
          "plan_segments: alpha_sum must be positive");
  require(std::isfinite(t) && t > 0.0, "plan_segments: t must be positive");
  const double x = alpha_sum * t / std::numbers::ln2;
  // Absorb rounding in alpha_sum * t so an exact multiple of ln 2 is not
  // bumped to the next integer.
  const double r = std::ceil(x - 1e-12 * std::max(1.0, x));
  require(r < 9e15, "plan_segments: segment count overflows");
  SegmentPlan plan{alpha_sum, t, std::max(1L, static_cast<long>(r)), 0.0};
  plan.tau = t / static_cast<double>(plan.r);
  return plan;
}

inline SegmentPlan plan_segments(const PauliSumHamiltonian& h, double t) {
  h.validate();
  return plan_segments(h.alpha_sum(), t);
}

enum class ErrorMode { kMaxForm, kSumForm };
enum class TotalMode { kTimesR, kPerSegment };

inline const char* to_string(ErrorMode m) {
  return m == ErrorMode::kMaxForm ? "max_form" : "sum_form";
}
inline const char* to_string(TotalMode m) {
  return m == TotalMode::kTimesR ? "times_r" : "per_segment";
}

struct BccksBounds {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta_m = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;  // 4 delta2, used by the error formulas
  // The two other constants in circulation for the V2 branch error; kept
  // for provenance only.
  double a2_statement = 0.0;
  double a2_proof = 0.0;
  double b = 0.0;
  double epsilon_segment = 0.0;
  double epsilon_total = 0.0;
  double xi_segment = 0.0;
  double p_cap = 0.0;
};

// Truncation error of one ln2-length segment at order K.
inline double segment_delta(int k) {
  return 2.0 * taylor_term(std::numbers::ln2, k + 1);
}

inline double oaa_probability_cap(int k1) {
  return 1.0 / (1.0 + 2.0 * segment_delta(k1));
}

namespace detail {

// Bound formulas without the amplitude-amplification cap check.
inline BccksBounds bccks_formulas(int k1, int k2, double p, long r,
                                  ErrorMode mode, TotalMode total) {
  BccksBounds b;
  b.delta1 = segment_delta(k1);
  b.delta_m = segment_delta(k2);
  b.p_cap = oaa_probability_cap(k1);
  const double d1 = b.delta1;
  const double q = 1.0 - p;
  b.delta2 = p / q * taylor_term(std::numbers::ln2, k1 + 1);
  b.a1 = d1 * (d1 * d1 + 3.0 * d1 + 4.0) / 2.0;
  b.a2 = 4.0 * b.delta2;
  const double s = 1.0 / std::sin(std::numbers::pi / 10.0);
  b.a2_statement = (1.0 + 40.0 / std::pow(s, 3) + 64.0 / std::pow(s, 5)) * b.delta2;
  b.a2_proof = (1.0 + 80.0 / std::pow(s, 3) + 128.0 / std::pow(s, 5)) * b.delta2;
  b.b = b.delta_m + 3.0 / q * d1 * d1;
  if (mode == ErrorMode::kSumForm) {
    b.epsilon_segment = 20.0 / q * d1 * d1 + 4.0 * b.delta_m;
  } else {
    b.epsilon_segment = std::max(40.0 / q * d1 * d1, 8.0 * b.delta_m);
  }
  b.epsilon_total = total == TotalMode::kTimesR
                        ? static_cast<double>(r) * b.epsilon_segment
                        : b.epsilon_segment;
  b.xi_segment = 8.0 / q * d1 * d1 + 4.0 * d1;
  return b;
}

}  // namespace detail

inline BccksBounds bccks_bounds(int k1, int k2, double p, long r,
                                ErrorMode mode,
                                TotalMode total = TotalMode::kTimesR) {
  require(k1 >= 1, "k1 must be at least 1");
  require(k2 > k1, "k2 must exceed k1");
  require(r >= 1, "r must be at least 1");
  require(std::isfinite(p) && p >= 0.0 && p <= kMaxMixProbability,
          "p must lie in [0, 1 - 1e-6]");
  require(p <= oaa_probability_cap(k1),
          "p exceeds the amplitude amplification cap 1/(1 + 2 delta1)");
  return detail::bccks_formulas(k1, k2, p, r, mode, total);
}

// CNOT count of one select oracle over L Pauli terms.
struct SelectCost {
  double cnots = 0.0;
  bool clamped = false;
};

inline SelectCost select_cnot_cost(int l) {
  require(l >= 2, "L must be at least 2");
  const double c = 7.5 * l + 6.0 * std::log2(static_cast<double>(l)) - 26.0;
  return c < 1.0 ? SelectCost{1.0, true} : SelectCost{c, false};
}

struct CnotCost {
  double g_cnot = 0.0;
  double per_select = 0.0;
  bool clamped = false;
};

inline CnotCost cnot_cost(double k_effective, int l, long r,
                          double selects_per_segment) {
  require(k_effective >= 0.0, "k_effective must be non-negative");
  require(r >= 1, "r must be at least 1");
  require(selects_per_segment > 0.0, "selects_per_segment must be positive");
  const SelectCost c = select_cnot_cost(l);
  return {selects_per_segment * static_cast<double>(r) * k_effective * c.cnots,
          c.cnots, c.clamped};
}

struct CostPoint {
  double g_indicator = 0.0;
  double g_cnot = 0.0;
  int k1 = 0;
  int k2 = 0;
  double p = 0.0;
  double k_mean = 0.0;
  bool clamped = false;
};

constexpr double kV2SelectWeight = 4.0 / 3.0;

// V1 costs three select calls of order k1, V2 four of order k2.
inline CostPoint rts_cost_point(int k1, int k2, double p, int l, long r) {
  require(k2 > k1 && k1 >= 0, "k2 must exceed k1");
  require(p >= 0.0 && p <= 1.0, "p must lie in [0, 1]");
  CostPoint c;
  c.k1 = k1;
  c.k2 = k2;
  c.p = p;
  c.g_indicator = p * k1 + (1.0 - p) * kV2SelectWeight * k2;
  c.k_mean = p * k1 + (1.0 - p) * k2;
  const CnotCost cc = cnot_cost(c.g_indicator, l, r, 3.0);
  c.g_cnot = cc.g_cnot;
  c.clamped = cc.clamped;
  return c;
}

inline CostPoint original_cost_point(int k, int l, long r) {
  require(k >= 0, "K must be non-negative");
  CostPoint c;
  c.k1 = c.k2 = k;
  c.p = 1.0;
  c.g_indicator = c.k_mean = k;
  const CnotCost cc = cnot_cost(k, l, r, 3.0);
  c.g_cnot = cc.g_cnot;
  c.clamped = cc.clamped;
  return c;
}

// Taylor truncation of exp(-i tau H); with `mix` the F2 branch of the
// mixture is returned instead of the plain order-k series.
inline DenseOperator build_truncated_operator(const DenseOperator& h,
                                              double tau, int k) {
  require_square(h, "build_truncated_operator");
  require(is_hermitian(h, 1e-10), "build_truncated_operator: H must be Hermitian");
  return matrix_polynomial(exponential_coefficients(Complex(0.0, -tau), k), h);
}

inline DenseOperator build_truncated_operator(const DenseOperator& h,
                                              double tau,
                                              const MixParameters& mix) {
  require_square(h, "build_truncated_operator");
  require(is_hermitian(h, 1e-10), "build_truncated_operator: H must be Hermitian");
  const SeriesMixSpec spec{
      exponential_coefficients(Complex(0.0, -tau), mix.k2), mix};
  return matrix_polynomial(modified_coefficients(spec).second, h);
}

enum class OaaVariant { kV1, kV2 };

// Normalization of the order-k1 LCU at alpha tau = ln 2.
inline double oaa_s1(int k1) {
  require(k1 >= 0, "k1 must be non-negative");
  double s = 0.0;
  for (int k = 0; k <= k1; ++k) s += taylor_term(std::numbers::ln2, k);
  return s;
}

inline double oaa_s2() { return 1.0 / std::sin(std::numbers::pi / 10.0); }

inline DenseOperator build_oaa_operator(const DenseOperator& f, OaaVariant v,
                                        double s) {
  require_square(f, "build_oaa_operator");
  require(std::isfinite(s) && s > 0.0, "build_oaa_operator: s must be positive");
  const DenseOperator ffdf = f * f.adjoint() * f;
  if (v == OaaVariant::kV1) {
    return (3.0 / s) * f - (4.0 / (s * s * s)) * ffdf;
  }
  return (5.0 / s) * f - (20.0 / std::pow(s, 3)) * ffdf +
         (16.0 / std::pow(s, 5)) * (ffdf * f.adjoint() * f);
}

inline DenseOperator exact_evolution(const DenseOperator& h, double t) {
  require_square(h, "exact_evolution");
  require(is_hermitian(h, 1e-10), "exact_evolution: H must be Hermitian");
  return hermitian_function(h, [t](double l) { return std::polar(1.0, -l * t); });
}

enum class SimulationMode { kExactChannel, kSampled };

inline const char* to_string(SimulationMode m) {
  return m == SimulationMode::kExactChannel ? "exact_channel" : "sampled";
}

struct SimulationOptions {
  SimulationMode mode = SimulationMode::kExactChannel;
  long shots = 1000;
  std::uint64_t seed = 1;
  ErrorMode error_mode = ErrorMode::kMaxForm;
};

struct SimulationResult {
  DenseOperator state;
  DenseOperator exact;
  SegmentPlan plan;
  BccksBounds bounds;
  // lhs: trace distance to the exact evolution; rhs: total bound. a1/a2/b are
  // the measured single-segment operator-norm errors.
  MixingVerdict verdict;
  long shots_used = 0;
  long shots_discarded = 0;
  // Sampled mode: trace-norm standard error of the shot average.
  double standard_error = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Uniform [0, 1) draw that depends only on (seed, shot, step).
inline double counter_uniform(std::uint64_t seed, std::uint64_t shot,
                              std::uint64_t step) {
  std::uint64_t z = detail::splitmix64(seed);
  z = detail::splitmix64(z ^ shot);
  z = detail::splitmix64(z ^ (step * 0xD1B54A32D192ED03ULL));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Runs r segments of the mixed V1/V2 channel. Exact mode applies the
// unnormalized channel per segment and normalizes once at the end. Sampled
// mode draws a V1/V2 choice per segment per shot; each shot's unnormalized
// final state enters the average with weight |psi|^2, matching the
// post-selected ensemble.
inline SimulationResult simulate_rts_evolution(const PauliSumHamiltonian& ham,
                                               double t,
                                               const MixParameters& mix,
                                               const StateVector& psi0,
                                               const SimulationOptions& opt) {
  ham.validate();
  mix.validate();
  const DenseOperator h = to_dense(ham);
  require(psi0.size() == h.rows(), "simulate: state dimension mismatch");
  require(psi0.allFinite() && psi0.norm() > 0.0, "simulate: invalid initial state");
  require(opt.mode == SimulationMode::kExactChannel || opt.shots >= 1,
          "simulate: shots must be positive");

  SimulationResult res;
  res.plan = plan_segments(ham, t);
  res.bounds = bccks_bounds(mix.k1, mix.k2, mix.p, res.plan.r, opt.error_mode);

  const DenseOperator f1 = build_truncated_operator(h, res.plan.tau, mix.k1);
  const DenseOperator f2 = build_truncated_operator(h, res.plan.tau, mix);
  const DenseOperator v1 = build_oaa_operator(f1, OaaVariant::kV1, oaa_s1(mix.k1));
  const DenseOperator v2 = build_oaa_operator(f2, OaaVariant::kV2, oaa_s2());
  const DenseOperator u_seg = exact_evolution(h, res.plan.tau);
  res.verdict.a1 = spectral_norm(v1 - u_seg);
  res.verdict.a2 = spectral_norm(v2 - u_seg);
  res.verdict.b = spectral_norm(mix.p * v1 + (1.0 - mix.p) * v2 - u_seg);

  const DenseOperator rho0 = pure_state(psi0);
  const DenseOperator u = exact_evolution(h, t);
  res.exact = u * rho0 * u.adjoint();
  res.exact = 0.5 * (res.exact + res.exact.adjoint()).eval();
  const auto dim = h.rows();

  if (opt.mode == SimulationMode::kExactChannel) {
    DenseOperator rho = rho0;
    for (long s = 0; s < res.plan.r; ++s) {
      rho = mix.p * v1 * rho * v1.adjoint() +
            (1.0 - mix.p) * v2 * rho * v2.adjoint();
    }
    const double tr = rho.trace().real();
    require(tr > 1e-14, "simulate: channel output has vanishing trace");
    res.state = 0.5 * (rho + rho.adjoint()) / tr;
  } else {
    const StateVector start = psi0 / psi0.norm();
    DenseOperator acc = DenseOperator::Zero(dim, dim);
    DenseOperator acc_w2x = DenseOperator::Zero(dim, dim);
    double sum_w = 0.0, sum_w2 = 0.0;
    for (long shot = 0; shot < opt.shots; ++shot) {
      StateVector psi = start;
      for (long s = 0; s < res.plan.r; ++s) {
        const bool first = counter_uniform(opt.seed, shot, s) < mix.p;
        psi = (first ? v1 : v2) * psi;
      }
      const double w = psi.squaredNorm();
      if (!(w > 1e-14) || !std::isfinite(w)) {
        ++res.shots_discarded;
        continue;
      }
      ++res.shots_used;
      const DenseOperator outer = psi * psi.adjoint();
      acc += outer;
      acc_w2x += w * outer;
      sum_w += w;
      sum_w2 += w * w;
    }
    require(res.shots_used > 0, "simulate: every shot was discarded");
    res.state = 0.5 * (acc + acc.adjoint()) / sum_w;
    // Delta-method variance of the ratio estimator in Frobenius norm, then
    // sqrt(dim) to bound the trace norm.
    const double var_num = sum_w2 - 2.0 * (res.state * acc_w2x).trace().real() +
                           res.state.squaredNorm() * sum_w2;
    const double se_f = std::sqrt(std::max(0.0, var_num)) / sum_w;
    res.standard_error = std::sqrt(static_cast<double>(dim)) * se_f;
  }
  res.verdict.lhs = trace_distance(res.state, res.exact);
  res.verdict.rhs = res.bounds.epsilon_total;
  res.verdict.holds = res.verdict.lhs <= res.verdict.rhs;
  res.verdict.epsilon_prime_exceeds_one = res.verdict.rhs / 2.0 > 1.0;
  return res;
}

}  // namespace rts
