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

#include <limits>
#include <optional>
#include <tuple>

#include "rts/bccks.hpp"

namespace rts {

struct SearchConfig {
  int k_min = 1;
  int k_max = 100;
  double p_cap = kMaxMixProbability;
  ErrorMode error_mode = ErrorMode::kSumForm;
  TotalMode total_mode = TotalMode::kTimesR;
  double v2_weight = kV2SelectWeight;  // relative select cost of the V2 branch
  bool enforce_oaa_cap = true;
  int l = 200;  // Pauli term count, for the CNOT column only

  void validate() const {
    require(k_min >= 1 && k_max > k_min, "search: need 1 <= k_min < k_max");
    require(k_max <= 500, "search: k_max must be at most 500");
    require(p_cap > 0.0 && p_cap <= kMaxMixProbability, "search: p_cap must lie in (0, 1 - 1e-6]");
    require(v2_weight > 0.0, "search: v2_weight must be positive");
  }
};

// p such that p k1 + (1-p) w k2 = g, if it lies in [0, p_cap].
inline std::optional<double> p_from_budget(int k1, int k2, double g,
                                           double p_cap = kMaxMixProbability,
                                           double weight = kV2SelectWeight) {
  require(k2 > k1, "k2 must exceed k1");
  const double hi = weight * k2;
  const double den = hi - k1;
  if (!(den > 0.0)) return std::nullopt;
  double p = (hi - g) / den;
  if (p < 0.0 && p > -1e-12) p = 0.0;  // g == w k2 up to rounding
  if (p < 0.0 || p > p_cap) return std::nullopt;
  return p;
}

struct OptimumPoint {
  CostPoint cost;
  BccksBounds bounds;
  bool found = false;
};

namespace detail {

inline double search_cap(int k1, const SearchConfig& cfg) {
  return cfg.enforce_oaa_cap ? std::min(cfg.p_cap, oaa_probability_cap(k1)) : cfg.p_cap;
}

inline BccksBounds search_bounds(int k1, int k2, double p, const SegmentPlan& plan,
                                 const SearchConfig& cfg) {
  return bccks_formulas(k1, k2, p, plan.r, cfg.error_mode, cfg.total_mode);
}

inline CostPoint weighted_cost(int k1, int k2, double p, const SegmentPlan& plan,
                               const SearchConfig& cfg) {
  CostPoint c = rts_cost_point(k1, k2, p, cfg.l, plan.r);
  c.g_indicator = p * k1 + (1.0 - p) * cfg.v2_weight * k2;
  return c;
}

}  // namespace detail

// Exhaustive search over (k1, k2) spending the whole budget g; smallest
// error wins, ties broken by (k2, k1, p). When g exceeds w k_max no pair can
// spend it and the all-V2 configurations at p = 0 are admitted.
inline OptimumPoint min_error_for_budget(double g, const SegmentPlan& plan,
                                         const SearchConfig& cfg = {}) {
  cfg.validate();
  require(std::isfinite(g) && g > 0.0, "budget must be positive");
  const bool saturated = g >= cfg.v2_weight * cfg.k_max;
  OptimumPoint best;
  auto key = [](const OptimumPoint& o) {
    return std::make_tuple(o.bounds.epsilon_total, o.cost.k2, o.cost.k1, o.cost.p);
  };
  for (int k1 = cfg.k_min; k1 < cfg.k_max; ++k1) {
    const double cap = detail::search_cap(k1, cfg);
    for (int k2 = k1 + 1; k2 <= cfg.k_max; ++k2) {
      auto p = p_from_budget(k1, k2, g, cap, cfg.v2_weight);
      if (!p && saturated) p = 0.0;
      if (!p) continue;
      OptimumPoint cand{detail::weighted_cost(k1, k2, *p, plan, cfg),
                        detail::search_bounds(k1, k2, *p, plan, cfg), true};
      if (!best.found || key(cand) < key(best)) best = cand;
    }
  }
  return best;
}

// Cheapest configuration meeting the error target. Error grows with p and
// cost falls with p, so each pair takes the largest admissible p (bisection).
inline OptimumPoint min_cost_for_error(double epsilon, const SegmentPlan& plan,
                                       const SearchConfig& cfg = {}) {
  cfg.validate();
  require(std::isfinite(epsilon) && epsilon > 0.0, "error target must be positive");
  OptimumPoint best;
  auto key = [](const OptimumPoint& o) {
    return std::make_tuple(o.cost.g_indicator, o.cost.k2, o.cost.k1, o.cost.p);
  };
  auto err = [&](int k1, int k2, double p) {
    return detail::search_bounds(k1, k2, p, plan, cfg).epsilon_total;
  };
  for (int k1 = cfg.k_min; k1 < cfg.k_max; ++k1) {
    const double cap = detail::search_cap(k1, cfg);
    for (int k2 = k1 + 1; k2 <= cfg.k_max; ++k2) {
      if (err(k1, k2, 0.0) > epsilon) continue;
      double p;
      if (err(k1, k2, cap) <= epsilon) {
        p = cap;
      } else {
        double lo = 0.0, hi = cap;
        while (hi - lo > 1e-12) {
          const double mid = 0.5 * (lo + hi);
          (err(k1, k2, mid) <= epsilon ? lo : hi) = mid;
        }
        p = lo;
      }
      OptimumPoint cand{detail::weighted_cost(k1, k2, p, plan, cfg),
                        detail::search_bounds(k1, k2, p, plan, cfg), true};
      if (!best.found || key(cand) < key(best)) best = cand;
    }
  }
  return best;
}

// Smallest K with r * delta(K) <= epsilon for the unmixed method.
inline int original_cost_for_error(double epsilon, const SegmentPlan& plan) {
  require(std::isfinite(epsilon) && epsilon > 0.0, "error target must be positive");
  for (int k = 1; k <= 1000; ++k) {
    if (static_cast<double>(plan.r) * segment_delta(k) <= epsilon) return k;
  }
  throw DomainError("error target unreachable below K = 1000");
}

struct AsymptoticPoint {
  double a_const = 0.0;  // log tau
  double l_var = 0.0;    // log(1/epsilon)
  double k_orig = 0.0;
  double k_mix = 0.0;
  double ratio = 0.0;
};

// Leading-order truncation orders with A = log tau and L = log(1/epsilon).
inline AsymptoticPoint asymptotic_ratio_logs(double a, double l) {
  require(std::isfinite(a) && std::isfinite(l) && a > 0.0 && l > 0.0,
          "asymptotics: log tau and log(1/epsilon) must be positive");
  require(a + l > std::numbers::e, "asymptotics: need log(tau/epsilon) > e");
  require(a + l / 2.0 > 1.0, "asymptotics: need log tau + log(1/epsilon)/2 > 1");
  AsymptoticPoint pt{a, l, 0.0, 0.0, 0.0};
  pt.k_orig = (a + l) / std::log(a + l);
  pt.k_mix = (a + l / 2.0) / std::log(a + l / 2.0);
  pt.ratio = pt.k_mix / pt.k_orig;
  return pt;
}

inline AsymptoticPoint asymptotic_ratio(double tau, double epsilon) {
  require(std::isfinite(tau) && tau > 1.0, "asymptotics: tau must exceed 1");
  require(epsilon > 0.0 && epsilon < 1.0, "asymptotics: epsilon must lie in (0, 1)");
  return asymptotic_ratio_logs(std::log(tau), -std::log(epsilon));
}

}  // namespace rts
