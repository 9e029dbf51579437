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

#include "dlgain/estimators.hpp"

#include <cmath>
#include <string>

#include "dlgain/learn.hpp"

namespace dlgain {

namespace {

// tr(A B) for Hermitian A, B without forming the product.
double trace_product_hermitian(const CMatrix& A, const CMatrix& B) {
  return (A.array() * B.transpose().array()).sum().real();
}

Complex trace_product(const CMatrix& A, const CMatrix& B) {
  return (A.array() * B.transpose().array()).sum();
}

}  // namespace

double mean_gain_power(const ScenarioConfig& config, const PilotPlan& plan,
                       const CorrelationBank& bank, const UplinkStatistics& stats,
                       double rho_dl, int observer, int source) {
  const int K = config.K;
  const int src_cell = source / K;
  const int src_k = source % K;
  const EstimationStatistics& s = stats.at(source);
  if (!(s.trace_phi > 0.0)) {
    throw NumericError("zero estimate-covariance trace for user " + std::to_string(source));
  }
  const CMatrix& R_obs = bank.at(src_cell, observer).R;

  // Non-coherent part: tr(Phi_src R_obs) / tr(Phi_src).
  double power = trace_product_hermitian(s.phi, R_obs) / s.trace_phi;

  // Coherent part when the observer's pilot is reused by the source's cell:
  // tau_p p_hat |tr(R_obs Psi^{-1} R_src)|^2 / tr(R_src Psi^{-1} R_src).
  const int obs_cell = observer / K;
  const int obs_k = observer % K;
  if (obs_k == src_k && plan.shares_pilots(obs_cell, src_cell)) {
    const double tau_p_p = config.tau_p() * config.p_hat;
    const double denom = s.trace_phi / tau_p_p;
    const Complex coherent = trace_product(R_obs, s.psi_inv_r);
    power += tau_p_p * std::norm(coherent) / denom;
  }
  return rho_dl * power;
}

double compute_T(const ScenarioConfig& config, const PilotPlan& plan,
                 const CorrelationBank& bank, const UplinkStatistics& stats,
                 double rho_dl, int cell, int k) {
  const int observer = cell * config.K + k;
  double T = config.sigma2_dl;
  for (int src = 0; src < config.users(); ++src) {
    if (src == observer) continue;
    const double eta = config.eta_of(src / config.K, src % config.K);
    T += eta * mean_gain_power(config, plan, bank, stats, rho_dl, observer, src);
  }
  return T;
}

std::vector<InterferenceProfile> interference_profiles(
    const ScenarioConfig& config, const PilotPlan& plan, const UserDrop& drop,
    const CorrelationBank& bank, const UplinkStatistics& stats, double rho_dl,
    double theta) {
  if (!(theta >= 1.0)) throw ConfigError("threshold multiplier theta must be >= 1");
  std::vector<InterferenceProfile> out;
  out.reserve(static_cast<std::size_t>(config.users()));
  for (int l = 0; l < config.L; ++l) {
    for (int k = 0; k < config.K; ++k) {
      const int u = l * config.K + k;
      InterferenceProfile p;
      p.T = compute_T(config, plan, bank, stats, rho_dl, l, k);
      p.alpha_mean = std::sqrt(rho_dl * stats.at(u).trace_phi);
      p.theta = theta;
      p.eta = config.eta_of(l, k);
      p.eta_rho_beta = p.eta * rho_dl * drop.beta_of(l, u);
      out.push_back(p);
    }
  }
  return out;
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name == "hardening") return EstimatorKind::kHardening;
  if (name == "model") return EstimatorKind::kModelAided;
  if (name == "genie") return EstimatorKind::kGenie;
  if (name == "learned") return EstimatorKind::kLearned;
  throw ConfigError("unknown estimator '" + std::string(name) +
                    "' (expected hardening|model|genie|learned)");
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kHardening: return "hardening";
    case EstimatorKind::kModelAided: return "model";
    case EstimatorKind::kGenie: return "genie";
    case EstimatorKind::kLearned: return "learned";
  }
  return "unknown";
}

std::vector<EstimatorKind> parse_estimator_list(std::string_view csv) {
  std::vector<EstimatorKind> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t end = std::min(csv.find(',', start), csv.size());
    const std::string_view item = csv.substr(start, end - start);
    if (!item.empty()) {
      const EstimatorKind kind = parse_estimator(item);
      bool seen = false;
      for (auto k : out) seen = seen || k == kind;
      if (!seen) out.push_back(kind);
    }
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("no estimators selected");
  return out;
}

GainEstimate estimate_hardening(const InterferenceProfile& profile) {
  return {profile.alpha_mean, Branch::kFallbackMean, EstimatorKind::kHardening};
}

GainEstimate estimate_model_aided(double xi, const InterferenceProfile& profile,
                                  double eta) {
  if (!(eta > 0.0)) throw DomainError("model-aided estimator needs eta > 0");
  if (xi > profile.threshold()) {
    return {std::sqrt((xi - profile.T) / eta), Branch::kFormula,
            EstimatorKind::kModelAided};
  }
  return {profile.alpha_mean, Branch::kFallbackMean, EstimatorKind::kModelAided};
}

double asymptotic_power(const ScenarioConfig& config, const EffectiveGains& gains,
                        int observer) {
  return gains.weighted_power(config, observer, true) + config.sigma2_dl;
}

GainEstimate estimate_genie_asymptotic(const ScenarioConfig& config,
                                       const EffectiveGains& gains, int observer,
                                       const InterferenceProfile& profile) {
  GainEstimate g = estimate_model_aided(asymptotic_power(config, gains, observer),
                                        profile, profile.eta);
  g.method = EstimatorKind::kGenie;
  return g;
}

Features learned_features(double xi_loo, const InterferenceProfile& profile) {
  return {xi_loo, profile.T, profile.eta_rho_beta};
}

GainEstimate estimate_learned(std::span<const double> features, const MlpModel& model) {
  return {model.predict(features), Branch::kNetwork, EstimatorKind::kLearned};
}

}  // namespace dlgain
