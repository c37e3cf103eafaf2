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
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rts/bccks.hpp"

namespace rts {
namespace {

using testing::Mat;

TEST(Pauli, IsingPresetShape) {
  const auto h = ising_chain(100, 1.0, 1.0);
  EXPECT_EQ(h.term_count(), 200);
  EXPECT_DOUBLE_EQ(h.alpha_sum(), 200.0);
  const auto small = ising_chain(3, 1.0, -0.5);
  EXPECT_EQ(small.terms[0].word, "XXI");
  EXPECT_EQ(small.terms[2].word, "XIX");
  EXPECT_TRUE(small.terms[3].negated);
  EXPECT_DOUBLE_EQ(small.alpha_sum(), 4.5);
}

TEST(Pauli, DenseMatchesKroneckerProducts) {
  const auto h = ising_chain(2, 0.7, 0.3);
  const Mat x = pauli_matrix('X'), z = pauli_matrix('Z'), id = Mat::Identity(2, 2);
  const Mat ref = 2 * 0.7 * kron(x, x) + 0.3 * (kron(z, id) + kron(id, z));
  EXPECT_LT((to_dense(h) - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Pauli, ParsesTextFormat) {
  std::istringstream in("# two-qubit example\n\n1.0 XX\n-0.5 ZI  # trailing comment\n0.25 IY\n");
  const auto h = parse_hamiltonian(in);
  EXPECT_EQ(h.n_qubits, 2);
  ASSERT_EQ(h.term_count(), 3);
  EXPECT_DOUBLE_EQ(h.alpha_sum(), 1.75);
  EXPECT_TRUE(h.terms[1].negated);
  std::istringstream bad("1.0 XQ\n");
  EXPECT_THROW(parse_hamiltonian(bad), DomainError);
  std::istringstream ragged("1.0 XX\n1.0 XXX\n");
  EXPECT_THROW(parse_hamiltonian(ragged), DomainError);
  std::istringstream junk("1.0 XX extra\n");
  EXPECT_THROW(parse_hamiltonian(junk), DomainError);
}

TEST(PlanSegments, IsingPreset) {
  const auto plan = plan_segments(ising_chain(100, 1.0, 1.0), 100.0);
  EXPECT_EQ(plan.r, 28854);
  EXPECT_DOUBLE_EQ(plan.tau, 100.0 / 28854);
  EXPECT_LE(plan.alpha_sum * plan.tau, std::numbers::ln2 + 1e-12);
}

TEST(PlanSegments, CeilingCases) {
  const auto one = plan_segments(1.0, std::numbers::ln2);
  EXPECT_EQ(one.r, 1);
  EXPECT_EQ(one.tau, std::numbers::ln2);
  EXPECT_EQ(plan_segments(1.0, 2.5 * std::numbers::ln2).r, 3);
  EXPECT_EQ(plan_segments(3.0, 7.0 * std::numbers::ln2 / 3.0).r, 7);
  EXPECT_THROW(plan_segments(1.0, 0.0), DomainError);
  EXPECT_THROW(plan_segments(1.0, -1.0), DomainError);
}

TEST(BccksBounds, DeltaValues) {
  const double ln2 = std::numbers::ln2;
  const auto b = bccks_bounds(7, 10, 0.0, 1, ErrorMode::kSumForm);
  EXPECT_NEAR(b.delta1, 2.641e-6, 2.641e-9);
  EXPECT_NEAR(b.delta1, 2.0 * std::pow(ln2, 8) / 40320.0, 1e-18);
  EXPECT_NEAR(b.delta_m, 2.0 * std::pow(ln2, 11) / 39916800.0, 1e-22);
  EXPECT_LE(b.delta_m, b.delta1);
}

TEST(BccksBounds, ZeroProbability) {
  const auto b = bccks_bounds(5, 9, 0.0, 1, ErrorMode::kSumForm);
  EXPECT_EQ(b.delta2, 0.0);
  EXPECT_EQ(b.a2, 0.0);
  EXPECT_DOUBLE_EQ(b.epsilon_segment, 20 * b.delta1 * b.delta1 + 4 * b.delta_m);
}

TEST(BccksBounds, FormulasBySubstitution) {
  const double p = 0.3, ln2 = std::numbers::ln2;
  const auto s = bccks_bounds(4, 8, p, 17, ErrorMode::kSumForm);
  const auto m = bccks_bounds(4, 8, p, 17, ErrorMode::kMaxForm);
  const double d1 = 2 * std::pow(ln2, 5) / 120.0;
  const double dm = 2 * std::pow(ln2, 9) / 362880.0;
  const double d2 = p / (1 - p) * std::pow(ln2, 5) / 120.0;
  EXPECT_NEAR(s.delta2, d2, 1e-15 * d2);
  EXPECT_NEAR(s.a1, d1 * (d1 * d1 + 3 * d1 + 4) / 2, 1e-15);
  EXPECT_NEAR(s.a2, 4 * d2, 1e-15);
  EXPECT_NEAR(s.b, dm + 3 / (1 - p) * d1 * d1, 1e-17);
  EXPECT_NEAR(s.xi_segment, 8 / (1 - p) * d1 * d1 + 4 * d1, 1e-15);
  EXPECT_NEAR(s.epsilon_segment, 20 / (1 - p) * d1 * d1 + 4 * dm, 1e-17);
  EXPECT_NEAR(m.epsilon_segment, std::max(40 / (1 - p) * d1 * d1, 8 * dm), 1e-17);
  EXPECT_DOUBLE_EQ(s.epsilon_total, 17 * s.epsilon_segment);
  EXPECT_DOUBLE_EQ(bccks_bounds(4, 8, p, 17, ErrorMode::kSumForm, TotalMode::kPerSegment)
                       .epsilon_total, s.epsilon_segment);
  EXPECT_LE(s.a2_statement, s.a2);
  EXPECT_LE(s.a2_proof, s.a2);
}

TEST(BccksBounds, TableOneConfiguration) {
  const auto b = bccks_bounds(9, 14, 0.9876, 28854, ErrorMode::kSumForm);
  EXPECT_LE(b.epsilon_total, 1e-8);
}

TEST(BccksBounds, MonotoneInK2) {
  for (int k2 = 4; k2 < 40; ++k2) {
    const auto a = bccks_bounds(3, k2, 0.4, 5, ErrorMode::kSumForm);
    const auto b = bccks_bounds(3, k2 + 1, 0.4, 5, ErrorMode::kSumForm);
    EXPECT_LT(b.delta_m, a.delta_m);
    EXPECT_LE(b.epsilon_segment, a.epsilon_segment);
  }
}

TEST(BccksBounds, Validation) {
  EXPECT_THROW(bccks_bounds(0, 3, 0.1, 1, ErrorMode::kSumForm), DomainError);
  EXPECT_THROW(bccks_bounds(4, 4, 0.1, 1, ErrorMode::kSumForm), DomainError);
  EXPECT_THROW(bccks_bounds(1, 4, 0.6, 1, ErrorMode::kSumForm), DomainError);  // cap ~0.51
  EXPECT_NO_THROW(bccks_bounds(1, 4, 0.5, 1, ErrorMode::kSumForm));
}

TEST(CnotCost, PublishedMultiplier) {
  const auto c = cnot_cost(1.0, 200, 28854, 3.0);
  EXPECT_NEAR(c.g_cnot, 131574240.0, 0.0005 * 131574240.0);
  EXPECT_FALSE(c.clamped);
}

TEST(CnotCost, ClampsTinyL) {
  const auto c = select_cnot_cost(2);
  EXPECT_TRUE(c.clamped);
  EXPECT_EQ(c.cnots, 1.0);
  EXPECT_THROW(select_cnot_cost(1), DomainError);
}

TEST(CnotCost, CostPoints) {
  const auto c = rts_cost_point(7, 10, 0.5, 200, 28854);
  EXPECT_NEAR(c.g_indicator, 10.1666666666666667, 1e-12);
  EXPECT_DOUBLE_EQ(c.k_mean, 8.5);
  EXPECT_NEAR(c.g_cnot, 3 * 28854 * c.g_indicator * select_cnot_cost(200).cnots, 1e-3);
  const auto o = original_cost_point(13, 200, 28854);
  EXPECT_EQ(o.g_indicator, 13.0);
}

TEST(TruncatedOperator, Orders) {
  std::mt19937_64 rng(21);
  const Mat h = testing::random_hermitian(4, rng);
  EXPECT_TRUE(build_truncated_operator(h, 0.3, 0).isApprox(Mat::Identity(4, 4)));
  const Mat f = build_truncated_operator(h, 0.3, 40);
  const Mat ref = testing::expm_taylor(Complex(0.0, -0.3) * h);
  EXPECT_LT((f - ref).cwiseAbs().maxCoeff(), 1e-12);
  const double tau = 0.2;
  const Mat f2 = build_truncated_operator(h, tau, MixParameters{1, 2, 0.5});
  const Mat hand = Mat::Identity(4, 4) - Complex(0.0, tau) * h - tau * tau * h * h;
  EXPECT_LT((f2 - hand).cwiseAbs().maxCoeff(), 1e-14);
  Mat not_h = h;
  not_h(0, 1) += 0.1;
  EXPECT_THROW(build_truncated_operator(not_h, 0.3, 3), DomainError);
}

TEST(OaaOperator, ScalarIdentities) {
  const double x = 0.5;
  EXPECT_NEAR(3 * x - 4 * x * x * x, 1.0, 1e-14);
  const double y = std::sin(std::numbers::pi / 10);
  EXPECT_NEAR(5 * y - 20 * std::pow(y, 3) + 16 * std::pow(y, 5), 1.0, 1e-14);
  EXPECT_NEAR(oaa_s2(), 1 / y, 1e-15);
  EXPECT_LT(oaa_s1(7), 2.0);
  EXPECT_NEAR(oaa_s1(60), 2.0, 1e-15);
}

TEST(OaaOperator, UnitaryInputIsFixedPoint) {
  std::mt19937_64 rng(22);
  const Mat u = exact_evolution(testing::random_hermitian(4, rng), 0.4);
  EXPECT_LT(spectral_norm(build_oaa_operator(u / 2.0, OaaVariant::kV1, 1.0) - u), 1e-10);
  const Mat v1 = build_oaa_operator(u / 2.0, OaaVariant::kV1, 1.0);
  EXPECT_TRUE(is_unitary(v1, 1e-10));
  EXPECT_LT(spectral_norm(build_oaa_operator(u, OaaVariant::kV1, 2.0) - u), 1e-10);
  EXPECT_LT(spectral_norm(build_oaa_operator(u, OaaVariant::kV2, oaa_s2()) - u), 1e-12);
}

TEST(ExactEvolution, Basics) {
  EXPECT_TRUE(exact_evolution(pauli_matrix('Z'), 0.0).isApprox(Mat::Identity(2, 2)));
  EXPECT_LT((exact_evolution(pauli_matrix('Z'), std::numbers::pi) + Mat::Identity(2, 2))
                .cwiseAbs().maxCoeff(), 1e-15);
  std::mt19937_64 rng(23);
  const Mat h = testing::random_hermitian(8, rng);
  const Mat u = exact_evolution(h, 1.0);
  EXPECT_LT((u.adjoint() * u - Mat::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((u * h - h * u).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LT((u - testing::expm_taylor(Complex(0.0, -1.0) * h)).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(SegmentOperators, MeasuredErrorsWithinLemmaBounds) {
  const auto ham = ising_chain(2, 1.0, 0.8);
  const Mat h = to_dense(ham);
  const double tau = std::numbers::ln2 / ham.alpha_sum();
  const Mat u = exact_evolution(h, tau);
  for (int k1 = 1; k1 <= 6; ++k1) {
    for (int k2 = k1 + 1; k2 <= 12; k2 += 2) {
      for (double p : {0.0, 0.2, 0.45}) {
        if (p > oaa_probability_cap(k1)) continue;
        const auto b = bccks_bounds(k1, k2, p, 1, ErrorMode::kMaxForm);
        const Mat v1 = build_oaa_operator(build_truncated_operator(h, tau, k1),
                                          OaaVariant::kV1, oaa_s1(k1));
        const Mat v2 = build_oaa_operator(build_truncated_operator(h, tau, {k1, k2, p}),
                                          OaaVariant::kV2, oaa_s2());
        EXPECT_LE(spectral_norm(v1 - u), b.a1) << k1 << " " << k2 << " " << p;
        EXPECT_LE(spectral_norm(v2 - u), b.a2 + b.delta_m) << k1 << " " << k2 << " " << p;
        EXPECT_LE(spectral_norm(p * v1 + (1 - p) * v2 - u), b.b)
            << k1 << " " << k2 << " " << p;
        const auto psi = StateVector::Unit(4, 1);
        const auto v = verify_mixing_lemma(v1, v2, u, p, psi * psi.adjoint());
        EXPECT_LE(v.lhs, b.epsilon_segment) << k1 << " " << k2 << " " << p;
      }
    }
  }
}

TEST(Simulate, ExactChannelWithinBound) {
  const auto ham = ising_chain(3, 1.0, 1.0);
  StateVector psi = StateVector::Zero(8);
  psi(0) = 1.0;
  const auto res = simulate_rts_evolution(ham, 2.0, {3, 6, 0.7}, psi, {});
  EXPECT_EQ(res.plan.r, 18);
  EXPECT_TRUE(res.verdict.holds);
  EXPECT_LE(res.verdict.lhs, res.bounds.epsilon_total);
  EXPECT_NEAR(res.state.trace().real(), 1.0, 1e-13);
}

TEST(Simulate, DegenerateMixtureIsV2Composition) {
  const auto ham = ising_chain(2, 1.0, 0.5);
  const Mat h = to_dense(ham);
  std::mt19937_64 rng(31);
  const StateVector psi = testing::random_state(4, rng);
  const double t = 0.05;
  const MixParameters mix{3, 4, 0.0};
  const auto res = simulate_rts_evolution(ham, t, mix, psi, {});
  const auto plan = plan_segments(ham, t);
  const Mat v2 = build_oaa_operator(build_truncated_operator(h, plan.tau, mix),
                                    OaaVariant::kV2, oaa_s2());
  StateVector x = psi;
  for (long s = 0; s < plan.r; ++s) x = v2 * x;
  EXPECT_LT((res.state - pure_state(x) / x.squaredNorm()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Simulate, SampledIsDeterministicPerSeed) {
  const auto ham = ising_chain(3, 1.0, 1.0);
  StateVector psi = StateVector::Zero(8);
  psi(3) = 1.0;
  SimulationOptions opt{SimulationMode::kSampled, 500, 42, ErrorMode::kMaxForm};
  const auto a = simulate_rts_evolution(ham, 1.0, {2, 5, 0.5}, psi, opt);
  const auto b = simulate_rts_evolution(ham, 1.0, {2, 5, 0.5}, psi, opt);
  EXPECT_TRUE((a.state.array() == b.state.array()).all());
  opt.seed = 43;
  const auto c = simulate_rts_evolution(ham, 1.0, {2, 5, 0.5}, psi, opt);
  EXPECT_FALSE((a.state.array() == c.state.array()).all());
  EXPECT_EQ(a.shots_used + a.shots_discarded, 500);
}

TEST(Simulate, CounterUniformDependsOnlyOnCounters) {
  EXPECT_EQ(counter_uniform(7, 3, 11), counter_uniform(7, 3, 11));
  EXPECT_NE(counter_uniform(7, 3, 11), counter_uniform(7, 3, 12));
  EXPECT_NE(counter_uniform(7, 3, 11), counter_uniform(7, 4, 11));
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = counter_uniform(1, i, 0);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u;
  }
  EXPECT_NEAR(mean / 100000, 0.5, 0.005);
}

}  // namespace
}  // namespace rts
