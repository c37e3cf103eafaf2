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

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "rts/series.hpp"

namespace rts {
namespace {

TEST(LogFactorial, SmallValues) {
  EXPECT_EQ(log_factorial(0), 0.0);
  EXPECT_EQ(log_factorial(1), 0.0);
  EXPECT_NEAR(log_factorial(20), static_cast<double>(testing::log_factorial_oracle(20)), 1e-10);
}

TEST(LogFactorial, RelativeAccuracyUpTo500) {
  for (int n = 2; n <= 500; ++n) {
    const double ref = static_cast<double>(testing::log_factorial_oracle(n));
    EXPECT_NEAR(log_factorial(n), ref, 1e-13 * ref) << n;
  }
  EXPECT_THROW(log_factorial(-1), DomainError);
}

TEST(BesselJ, ZeroArgument) {
  const auto j = bessel_j_sequence(0.0, 2);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0], 1.0);
  EXPECT_EQ(j[1], 0.0);
  EXPECT_EQ(j[2], 0.0);
}

TEST(BesselJ, MatchesPowerSeries) {
  EXPECT_NEAR(bessel_j_sequence(1.0, 0)[0], 0.7651976865579666, 1e-15);
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, -3.0}) {
    const auto j = bessel_j_sequence(t, 40);
    for (int k = 0; k <= 40; ++k) {
      EXPECT_NEAR(j[k], static_cast<double>(testing::bessel_j_series(k, t)), 1e-12)
          << "t=" << t << " k=" << k;
    }
  }
}

TEST(BesselJ, RecurrenceHoldsAtInteriorIndices) {
  for (double t : {2.0, 7.5, 30.0, 99.0}) {
    const auto j = bessel_j_sequence(t, 300);
    for (int k = 1; k < 300; ++k) {
      EXPECT_NEAR(j[k - 1] + j[k + 1], 2.0 * k / t * j[k], 1e-12) << t << " " << k;
    }
  }
}

TEST(BesselJ, LargeArgumentSumRules) {
  // sum J_k^2 over all k (with J_{-k} = (-1)^k J_k) is 1.
  const auto j = bessel_j_sequence(100.0, 300);
  double s = j[0] * j[0];
  for (int k = 1; k <= 300; ++k) s += 2.0 * j[k] * j[k];
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(j[0], 0.01998585030422333, 1e-12);
}

TEST(BesselJ, RejectsOutOfDomain) {
  EXPECT_THROW(bessel_j_sequence(101.0, 3), DomainError);
  EXPECT_THROW(bessel_j_sequence(1.0, 301), DomainError);
}

TEST(BesselIScaled, MatchesPowerSeries) {
  for (double z : {0.05, 0.5, 2.0, 8.0, 20.0}) {
    const auto ik = bessel_i_scaled_sequence(z, 25);
    for (int k = 0; k <= 25; ++k) {
      const double ref = static_cast<double>(std::exp(-static_cast<long double>(z)) *
                                             testing::bessel_i_series(k, z));
      EXPECT_NEAR(ik[k], ref, 1e-14 + 1e-12 * ref) << z << " " << k;
    }
  }
}

TEST(BesselIScaled, LargeArgumentRecurrence) {
  const double z = 480.0;
  const auto ik = bessel_i_scaled_sequence(z, 60);
  for (int k = 1; k < 60; ++k) {
    EXPECT_NEAR(ik[k - 1] - ik[k + 1], 2.0 * k / z * ik[k], 1e-14);
  }
  // Leading asymptotic term 1/sqrt(2 pi z) (1 + 1/(8z)).
  EXPECT_NEAR(ik[0], (1.0 + 1.0 / (8 * z)) / std::sqrt(2.0 * std::numbers::pi * z), 1e-8);
}

TEST(Chebyshev, LowOrders) {
  EXPECT_EQ(chebyshev_t(0, 0.3), 1.0);
  EXPECT_EQ(chebyshev_t(1, 0.3), 0.3);
  EXPECT_NEAR(chebyshev_t(3, 0.5), -1.0, 1e-15);
  EXPECT_THROW(chebyshev_t(2, 1.0001), DomainError);
}

TEST(Chebyshev, MatchesCosineOnThetaGrid) {
  for (int i = 0; i < 1000; ++i) {
    const double theta = std::numbers::pi * i / 999.0;
    const auto t = chebyshev_t_sequence(64, std::cos(theta));
    for (int k = 0; k <= 64; ++k) {
      EXPECT_NEAR(t[k], std::cos(k * theta), 1e-12);
      EXPECT_LE(std::abs(t[k]), 1.0 + 1e-12);
    }
  }
}

TEST(TaylorTail, ClosedBoundValues) {
  const double ln2 = std::numbers::ln2;
  const double ref7 = 2.0 * std::exp(8 * std::log(ln2) - std::log(40320.0));
  EXPECT_NEAR(taylor_tail(ln2, 7, TailMode::kClosedBound), ref7, 1e-12 * ref7);
  EXPECT_NEAR(taylor_tail(ln2, 7, TailMode::kClosedBound), 2.641e-6, 2.641e-9);
  const double ref13 = static_cast<double>(
      2.0L * std::exp(14 * std::log(static_cast<long double>(ln2)) -
                      testing::log_factorial_oracle(14)));
  EXPECT_NEAR(taylor_tail(ln2, 13, TailMode::kClosedBound), ref13, 1e-12 * ref13);
  EXPECT_NEAR(taylor_tail(ln2, 13, TailMode::kClosedBound), 1.3557e-13, 1e-17);
}

TEST(TaylorTail, ExactMode) {
  EXPECT_NEAR(taylor_tail(std::numbers::ln2, 0, TailMode::kExact), 1.0, 1e-13);
  for (int k = 0; k <= 6; ++k) {
    long double partial = 0.0L, term = 1.0L;
    for (int j = 0; j <= k; ++j) {
      partial += term;
      term *= 0.5L / (j + 1);
    }
    const double ref = static_cast<double>(std::exp(0.5L) - partial);
    EXPECT_NEAR(taylor_tail(0.5, k, TailMode::kExact), ref, 1e-13 * ref) << k;
  }
}

TEST(TaylorTail, ClosedBoundDominatesExact) {
  for (double c : {0.01, 0.1, 0.3, 0.5, std::numbers::ln2}) {
    for (int k = 0; k <= 100; ++k) {
      EXPECT_LE(taylor_tail(c, k, TailMode::kExact), taylor_tail(c, k, TailMode::kClosedBound));
    }
  }
}

TEST(TaylorTail, MarginRuleEnforced) {
  EXPECT_THROW(taylor_tail(2.0, 1, TailMode::kClosedBound), DomainError);
  EXPECT_NO_THROW(taylor_tail(2.0, 2, TailMode::kClosedBound));
  EXPECT_THROW(taylor_tail(0.0, 3, TailMode::kExact), DomainError);
}

TEST(ErfReference, Values) {
  EXPECT_EQ(erf_reference(0.0), 0.0);
  EXPECT_NEAR(erf_reference(10.0), 1.0, 1e-14);
  EXPECT_NEAR(erf_reference(1.0), static_cast<double>(testing::erf_quadrature(1.0L)), 1e-14);
  for (double x : {0.1, 0.6, 2.0, 3.0, 4.5}) {
    EXPECT_NEAR(erf_reference(x), static_cast<double>(testing::erf_quadrature(x)), 1e-14) << x;
  }
}

TEST(ErfReference, OddAndMonotone) {
  double prev = -2.0;
  for (int i = -600; i <= 600; ++i) {
    const double x = i / 100.0;
    EXPECT_EQ(erf_reference(-x), -erf_reference(x));
    EXPECT_GE(erf_reference(x), prev);
    prev = erf_reference(x);
  }
}

TEST(SeriesCoefficients, Invariants) {
  EXPECT_THROW(SeriesCoefficients(std::vector<std::complex<double>>{}), DomainError);
  EXPECT_THROW(SeriesCoefficients({1.0, std::nan("")}), DomainError);
  const auto c = exponential_coefficients({0.0, -1.0}, 3);
  EXPECT_EQ(c.truncation_order(), 3);
  EXPECT_NEAR(std::abs(c[2] - std::complex<double>(-0.5, 0.0)), 0.0, 1e-16);
}

}  // namespace
}  // namespace rts
