// Copyright 2026 The dlgain Authors
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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dlgain/uplink.hpp"
#include "test_support.hpp"

namespace dlgain {
namespace {

using testing::CrossCovariance;
using testing::relative_frobenius;

// Every (BS, user) correlation equal to beta I.
CorrelationBank scaled_identity_bank(const ScenarioConfig& c, double beta) {
  std::vector<CorrelationMatrix> ms(static_cast<std::size_t>(c.L) * c.users(),
                                    make_correlation(beta * CMatrix::Identity(c.M, c.M)));
  return CorrelationBank(c.L, c.users(), std::move(ms));
}

ScenarioConfig scalar_config(int f) {
  ScenarioConfig c;
  c.M = 4;
  c.K = 1;
  c.f = f;
  return c.resolved();
}

TEST(Psi, ScalarCaseUniversalReuse) {
  const auto c = scalar_config(1);
  const double beta = 1e-12;
  const auto bank = scaled_identity_bank(c, beta);
  const CMatrix psi = build_psi(c, assign_pilots(c), bank, 2, 0);
  const double expect = 4 * c.tau_p() * c.p_hat * beta + c.sigma2_ul;
  EXPECT_LT(relative_frobenius(psi, expect * CMatrix::Identity(4, 4)), 1e-14);
}

TEST(Psi, NoContaminationWithFullReuse) {
  const auto c = scalar_config(4);
  const double beta = 1e-12;
  const auto bank = scaled_identity_bank(c, beta);
  const CMatrix psi = build_psi(c, assign_pilots(c), bank, 0, 0);
  const double expect = c.tau_p() * c.p_hat * beta + c.sigma2_ul;
  EXPECT_LT(relative_frobenius(psi, expect * CMatrix::Identity(4, 4)), 1e-14);
}

TEST(Psi, HermitianWithNoiseFloor) {
  const auto c = testing::small_config(16);
  const auto net = Network::generate(c, 0);
  for (int l = 0; l < c.L; ++l) {
    const CMatrix psi = build_psi(c, net.plan(), net.correlations(), l, 1);
    EXPECT_LT((psi - psi.adjoint()).norm(), 1e-14 * psi.norm());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(psi, Eigen::EigenvaluesOnly);
    EXPECT_GE(eig.eigenvalues().minCoeff(), c.sigma2_ul * (1 - 1e-9));
  }
}

TEST(Statistics, PhiPlusErrorIsR) {
  const auto c = testing::small_config(16);
  const auto net = Network::generate(c, 1);
  for (int u = 0; u < c.users(); ++u) {
    const auto& s = net.uplink().at(u);
    const int cell = u / c.K;
    const CMatrix& R = net.correlations().at(cell, u).R;
    EXPECT_LT(relative_frobenius(s.phi + s.error_cov, R), 1e-10);
    EXPECT_GT(s.trace_phi, 0.0);
    EXPECT_LE(s.trace_phi, R.trace().real());
  }
}

TEST(Estimate, ScalarVarianceClosedForm) {
  const auto c = scalar_config(4);
  const double beta = 1e-12;
  const auto bank = scaled_identity_bank(c, beta);
  const auto plan = assign_pilots(c);
  const UplinkStatistics stats(c, plan, bank);
  auto chan = rng_stream(5, stage::kChannel);
  auto noise = rng_stream(5, stage::kPilotNoise);
  double power = 0.0;
  const int n = 100000;
  for (int b = 0; b < n; ++b) {
    const auto g = sample_channels(bank, chan);
    const auto est = estimate_channels(c, plan, stats, g, noise);
    power += est.g_hat[0].squaredNorm() / c.M;
  }
  const double tp = c.tau_p() * c.p_hat;
  const double expect = tp * beta * beta / (tp * beta + c.sigma2_ul);
  EXPECT_NEAR(power / n, expect, 0.03 * expect);
}

TEST(Estimate, HighPilotPowerRecoversChannel) {
  auto c = scalar_config(4);
  c.p_hat = 1e6;
  const double beta = 1e-12;
  const auto bank = scaled_identity_bank(c, beta);
  const auto plan = assign_pilots(c);
  const UplinkStatistics stats(c, plan, bank);
  EXPECT_LT(stats.at(0).error_cov.norm() / bank.at(0, 0).R.norm(), 1e-3);
  auto chan = rng_stream(6, stage::kChannel);
  auto noise = rng_stream(6, stage::kPilotNoise);
  const auto g = sample_channels(bank, chan);
  const auto est = estimate_channels(c, plan, stats, g, noise);
  EXPECT_LT((est.g_hat[0] - g.at(0, 0)).norm() / g.at(0, 0).norm(), 0.05);
}

TEST(Estimate, SampleCovarianceMatchesPhiAndOrthogonalError) {
  const auto c = testing::small_config(8);
  const auto net = Network::generate(c, 2);
  const int user = 4;
  const int cell = user / c.K;
  CrossCovariance est_cov(c.M, c.M), cross(c.M, c.M);
  const int n = 100000;
  for (int b = 0; b < n; ++b) {
    const auto s = net.simulate_block(0, b, {.synthesize = false});
    const CVector& gh = s.estimates.g_hat[user];
    est_cov.add(gh, gh);
    cross.add(gh, s.channels.at(cell, user) - gh);
  }
  const auto& stats = net.uplink().at(user);
  EXPECT_LT(relative_frobenius(est_cov.mean(), stats.phi), 0.05);
  const double scale = stats.phi.diagonal().real().maxCoeff() +
                       stats.error_cov.diagonal().real().maxCoeff();
  EXPECT_LT(cross.mean().cwiseAbs().maxCoeff(), 5.0 / std::sqrt(double(n)) * scale);
}

// Universal reuse couples the estimate to the co-pilot user's channel;
// full reuse removes the coupling.
TEST(Estimate, PilotContaminationStructure) {
  const double beta = 1e-12;
  for (int f : {1, 4}) {
    const auto c = scalar_config(f);
    const auto bank = scaled_identity_bank(c, beta);
    const auto plan = assign_pilots(c);
    const UplinkStatistics stats(c, plan, bank);
    auto chan = rng_stream(8, stage::kChannel);
    auto noise = rng_stream(8, stage::kPilotNoise);
    CrossCovariance cross(c.M, c.M);
    const int n = 20000;
    for (int b = 0; b < n; ++b) {
      const auto g = sample_channels(bank, chan);
      const auto est = estimate_channels(c, plan, stats, g, noise);
      cross.add(est.g_hat[0], g.at(0, 1));  // BS 0 sees cell-1 user, slot 0
    }
    const double tp = c.tau_p() * c.p_hat;
    const double psi = 4 * tp * beta + c.sigma2_ul;
    const double coupled = tp * beta * beta / psi;
    const double measured = cross.mean().diagonal().real().mean();
    if (f == 1) {
      EXPECT_NEAR(measured, coupled, 0.05 * coupled);
    } else {
      EXPECT_LT(std::abs(measured), 5.0 / std::sqrt(double(n)) * beta);
    }
  }
}

}  // namespace
}  // namespace dlgain
