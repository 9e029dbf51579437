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

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "dlgain/channel.hpp"
#include "dlgain/downlink.hpp"
#include "dlgain/scenario.hpp"
#include "dlgain/uplink.hpp"

namespace dlgain {

class MlpModel;

// Drop-static quantities the blind estimators need for one user.
struct InterferenceProfile {
  double T = 0.0;           // mean interference-plus-noise power, mW
  double alpha_mean = 0.0;  // E{alpha_lk^lk} = sqrt(rho_dl tr(Phi_lk))
  double theta = 1.0;       // threshold multiplier, Theta = theta * T
  double eta = 0.0;         // DL power fraction of the user
  double eta_rho_beta = 0.0;

  double threshold() const { return theta * T; }
};

// Closed-form mean interference-plus-noise power under MR precoding:
// non-coherent trace-ratio terms for every other precoder plus the coherent
// pilot-contamination term for co-pilot cells, plus sigma2_dl.
double compute_T(const ScenarioConfig& config, const PilotPlan& plan,
                 const CorrelationBank& bank, const UplinkStatistics& stats,
                 double rho_dl, int cell, int k);

// E{|alpha_obs^src|^2} under MR precoding, for any (observer, source) pair.
double mean_gain_power(const ScenarioConfig& config, const PilotPlan& plan,
                       const CorrelationBank& bank, const UplinkStatistics& stats,
                       double rho_dl, int observer, int source);

std::vector<InterferenceProfile> interference_profiles(
    const ScenarioConfig& config, const PilotPlan& plan, const UserDrop& drop,
    const CorrelationBank& bank, const UplinkStatistics& stats, double rho_dl,
    double theta = 1.0);

enum class EstimatorKind { kHardening, kModelAided, kGenie, kLearned };

inline constexpr std::array<EstimatorKind, 4> kAllEstimators = {
    EstimatorKind::kHardening, EstimatorKind::kModelAided, EstimatorKind::kGenie,
    EstimatorKind::kLearned};

EstimatorKind parse_estimator(std::string_view name);
std::string_view to_string(EstimatorKind kind);
std::vector<EstimatorKind> parse_estimator_list(std::string_view csv);

enum class Branch { kFormula, kFallbackMean, kNetwork };

struct GainEstimate {
  double value = 0.0;
  Branch branch = Branch::kFallbackMean;
  EstimatorKind method = EstimatorKind::kHardening;
};

GainEstimate estimate_hardening(const InterferenceProfile& profile);

// sqrt((xi - T) / eta) above the threshold, the mean gain otherwise.
GainEstimate estimate_model_aided(double xi, const InterferenceProfile& profile,
                                  double eta);

// Sum of eta |alpha|^2 over all sources plus sigma2_dl: the value the sample
// power converges to for an infinitely long block.
double asymptotic_power(const ScenarioConfig& config, const EffectiveGains& gains,
                        int observer);

// Model-aided estimator fed the asymptotic power instead of the sample power.
GainEstimate estimate_genie_asymptotic(const ScenarioConfig& config,
                                       const EffectiveGains& gains, int observer,
                                       const InterferenceProfile& profile);

// Features: [xi_loo, T, eta * rho_dl * beta^l_lk].
using Features = std::array<double, 3>;

Features learned_features(double xi_loo, const InterferenceProfile& profile);

GainEstimate estimate_learned(std::span<const double> features, const MlpModel& model);

}  // namespace dlgain
