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

#pragma once

#include <vector>

#include "dlgain/channel.hpp"
#include "dlgain/rng.hpp"
#include "dlgain/scenario.hpp"
#include "dlgain/types.hpp"

namespace dlgain {

// Drop-static MMSE statistics for the own-cell channel of user k in cell l
// (observed at BS l, pilot slot k).
struct EstimationStatistics {
  // Psi = sum_{l' in P_l} tau_p p_hat R^l_{l'k} + sigma2_ul I.
  CMatrix psi;
  Eigen::LLT<CMatrix> psi_factor;
  // Psi^{-1} R^l_{lk}, obtained by a Hermitian solve.
  CMatrix psi_inv_r;
  // sqrt(p_hat) R Psi^{-1}: maps the despread pilot statistic to the estimate.
  CMatrix estimator;
  // Estimate covariance tau_p p_hat R Psi^{-1} R and error covariance R - Phi.
  CMatrix phi;
  CMatrix error_cov;
  double trace_phi = 0.0;
};

CMatrix build_psi(const ScenarioConfig& config, const PilotPlan& plan,
                  const CorrelationBank& bank, int cell, int k);

EstimationStatistics estimation_statistics(const ScenarioConfig& config,
                                           const PilotPlan& plan,
                                           const CorrelationBank& bank, int cell,
                                           int k);

class UplinkStatistics {
 public:
  UplinkStatistics() = default;
  UplinkStatistics(const ScenarioConfig& config, const PilotPlan& plan,
                   const CorrelationBank& bank);

  const EstimationStatistics& at(int user) const { return stats_[user]; }
  const EstimationStatistics& at(int cell, int k) const {
    return stats_[static_cast<std::size_t>(cell) * K_ + k];
  }
  int users() const { return static_cast<int>(stats_.size()); }

 private:
  int K_ = 0;
  std::vector<EstimationStatistics> stats_;
};

// Channel realizations of one block, g^l_u for every BS l and user u, indexed
// [bs * users + user].
struct ChannelSet {
  int L = 0;
  int users = 0;
  std::vector<CVector> g;

  const CVector& at(int bs, int user) const {
    return g[static_cast<std::size_t>(bs) * users + user];
  }
  CVector& at(int bs, int user) { return g[static_cast<std::size_t>(bs) * users + user]; }
};

ChannelSet sample_channels(const CorrelationBank& bank, Rng& rng);

// Own-cell estimates for one block, indexed by user.
struct ChannelEstimate {
  std::vector<CVector> y_tilde;
  std::vector<CVector> g_hat;
};

// Synthesizes the despread pilot statistic
//   y~ = tau_p sum_{l' in P_l} sqrt(p_hat) g^l_{l'k} + n,  n ~ CN(0, tau_p sigma2_ul I)
// so that the MMSE estimate sqrt(p_hat) R Psi^{-1} y~ is CN(0, Phi).
ChannelEstimate estimate_channels(const ScenarioConfig& config, const PilotPlan& plan,
                                  const UplinkStatistics& stats,
                                  const ChannelSet& channels, Rng& rng);

}  // namespace dlgain
