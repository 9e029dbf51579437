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

#include "dlgain/uplink.hpp"

#include <cmath>

namespace dlgain {

CMatrix build_psi(const ScenarioConfig& config, const PilotPlan& plan,
                  const CorrelationBank& bank, int cell, int k) {
  const int M = config.M;
  const double tau_p = config.tau_p();
  CMatrix psi = config.sigma2_ul * CMatrix::Identity(M, M);
  for (int other : plan.copilot_cells[cell]) {
    psi += (tau_p * config.p_hat) * bank.at(cell, other * config.K + k).R;
  }
  return psi;
}

EstimationStatistics estimation_statistics(const ScenarioConfig& config,
                                           const PilotPlan& plan,
                                           const CorrelationBank& bank, int cell,
                                           int k) {
  EstimationStatistics s;
  const CMatrix& R = bank.at(cell, cell * config.K + k).R;
  s.psi = build_psi(config, plan, bank, cell, k);
  s.psi_factor.compute(s.psi);
  if (s.psi_factor.info() != Eigen::Success) {
    throw NumericError("Psi is not positive definite for cell " +
                       std::to_string(cell) + ", user " + std::to_string(k));
  }
  s.psi_inv_r = s.psi_factor.solve(R);
  // R Psi^{-1} = (Psi^{-1} R)^H for Hermitian R and Psi.
  s.estimator = std::sqrt(config.p_hat) * s.psi_inv_r.adjoint();
  const double scale = config.tau_p() * config.p_hat;
  s.phi = scale * (R * s.psi_inv_r);
  s.phi = 0.5 * (s.phi + s.phi.adjoint()).eval();
  s.error_cov = R - s.phi;
  s.trace_phi = s.phi.trace().real();
  return s;
}

UplinkStatistics::UplinkStatistics(const ScenarioConfig& config, const PilotPlan& plan,
                                   const CorrelationBank& bank)
    : K_(config.K) {
  stats_.reserve(static_cast<std::size_t>(config.users()));
  for (int l = 0; l < config.L; ++l) {
    for (int k = 0; k < config.K; ++k) {
      stats_.push_back(estimation_statistics(config, plan, bank, l, k));
    }
  }
}

ChannelSet sample_channels(const CorrelationBank& bank, Rng& rng) {
  ChannelSet set;
  set.L = bank.L();
  set.users = bank.users();
  set.g.resize(static_cast<std::size_t>(set.L) * set.users);
  ComplexNormal normal;
  CVector z;
  for (int bs = 0; bs < set.L; ++bs) {
    for (int u = 0; u < set.users; ++u) {
      CVector& g = set.at(bs, u);
      g.resize(bank.antennas());
      sample_channel(bank.at(bs, u), rng, normal, z, g);
    }
  }
  return set;
}

ChannelEstimate estimate_channels(const ScenarioConfig& config, const PilotPlan& plan,
                                  const UplinkStatistics& stats,
                                  const ChannelSet& channels, Rng& rng) {
  const int K = config.K;
  const int users = config.users();
  const double tau_p = config.tau_p();
  const double pilot_amp = tau_p * std::sqrt(config.p_hat);
  const double noise_amp = std::sqrt(tau_p * config.sigma2_ul);

  ChannelEstimate est;
  est.y_tilde.resize(static_cast<std::size_t>(users));
  est.g_hat.resize(static_cast<std::size_t>(users));
  ComplexNormal normal;
  for (int l = 0; l < config.L; ++l) {
    for (int k = 0; k < K; ++k) {
      const int u = l * K + k;
      CVector& y = est.y_tilde[u];
      y.resize(config.M);
      normal.fill(rng, y);
      y *= noise_amp;
      for (int other : plan.copilot_cells[l]) {
        y += pilot_amp * channels.at(l, other * K + k);
      }
      est.g_hat[u].noalias() = stats.at(u).estimator * y;
    }
  }
  return est;
}

}  // namespace dlgain
