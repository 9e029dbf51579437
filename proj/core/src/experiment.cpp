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

#include "dlgain/experiment.hpp"

#include <cmath>

namespace dlgain {

namespace {

bool contains(const std::vector<EstimatorKind>& list, EstimatorKind kind) {
  for (auto k : list) {
    if (k == kind) return true;
  }
  return false;
}

}  // namespace

double hardening_se_closed_form(const Network& network, int user) {
  const ScenarioConfig& c = network.config();
  const EstimationStatistics& s = network.uplink().at(user);
  const CMatrix& R = network.correlations().at(user / c.K, user).R;
  const double rho = network.rho_dl();
  const double eta = c.eta_of(user / c.K, user % c.K);
  const double signal = eta * rho * s.trace_phi;
  const double variance =
      eta * rho * (s.phi.array() * R.transpose().array()).sum().real() / s.trace_phi;
  const double sinr = signal / (variance + network.profile(user).T);
  return spectral_efficiency(sinr, c.tau_p(), c.tau_c);
}

DropEvaluation evaluate_drop(const Network& network, std::uint64_t drop_index,
                             const EvalOptions& options) {
  const ScenarioConfig& c = network.config();
  const int users = c.users();
  const auto& kinds = options.estimators;
  const std::size_t E = kinds.size();
  if (contains(kinds, EstimatorKind::kLearned) && options.model == nullptr) {
    throw ConfigError("learned estimator selected without a model");
  }
  if (options.blocks == 0) throw ConfigError("evaluation needs at least one block");

  std::vector<double> eta(static_cast<std::size_t>(users));
  for (int u = 0; u < users; ++u) eta[u] = c.eta_of(u / c.K, u % c.K);

  std::vector<std::vector<NmseAccumulator>> nmse_acc(users, std::vector<NmseAccumulator>(E));
  std::vector<std::vector<MomentAccumulator>> se_acc(
      users, std::vector<MomentAccumulator>(E, MomentAccumulator(users)));
  std::vector<PerfectCsiAccumulator> perfect(users);

  BlockOptions block_options;
  block_options.symbols = options.symbols;
  RMatrix features(kFeatureCount, users);
  std::vector<Complex> row(static_cast<std::size_t>(users));

  for (std::uint64_t b = 0; b < options.blocks; ++b) {
    const BlockSample sample = network.simulate_block(drop_index, b, block_options);
    const EffectiveGains& gains = sample.gains;
    const ReceivedBlock& rx = sample.received;
    const int symbols_for_se = options.se_all_symbols ? rx.samples() : 1;

    RVector learned_first;
    if (options.model) {
      for (int u = 0; u < users; ++u) {
        const Features f = learned_features(rx.xi_loo(u, 0), network.profile(u));
        for (int i = 0; i < kFeatureCount; ++i) features(i, u) = f[i];
      }
      learned_first = options.model->predict_batch(features);
    }

    for (int u = 0; u < users; ++u) {
      const InterferenceProfile& p = network.profile(u);
      const Complex truth = gains.own(u);
      for (int s = 0; s < users; ++s) row[s] = gains(u, s);
      if (options.compute_se) {
        perfect[u].add(perfect_csi_sinr(row, u, eta, c.sigma2_dl));
      }

      const double genie = estimate_genie_asymptotic(c, gains, u, p).value;
      for (std::size_t e = 0; e < E; ++e) {
        const EstimatorKind kind = kinds[e];
        if (options.compute_nmse) {
          double est = 0.0;
          switch (kind) {
            case EstimatorKind::kHardening: est = p.alpha_mean; break;
            case EstimatorKind::kModelAided:
              est = estimate_model_aided(rx.xi[u], p, p.eta).value;
              break;
            case EstimatorKind::kGenie: est = genie; break;
            case EstimatorKind::kLearned: est = learned_first[u]; break;
          }
          nmse_acc[u][e].add(est, truth);
        }
        if (options.compute_se) {
          for (int n = 0; n < symbols_for_se; ++n) {
            double bar = 0.0;
            switch (kind) {
              case EstimatorKind::kHardening: bar = p.alpha_mean; break;
              case EstimatorKind::kModelAided:
                bar = estimate_model_aided(rx.xi_loo(u, n), p, p.eta).value;
                break;
              case EstimatorKind::kGenie: bar = genie; break;
              case EstimatorKind::kLearned:
                bar = n == 0 ? learned_first[u]
                             : options.model->predict(learned_features(rx.xi_loo(u, n), p));
                break;
            }
            se_acc[u][e].add(row, u, bar);
          }
        }
      }
    }
  }

  DropEvaluation out;
  out.drop = drop_index;
  out.users.resize(static_cast<std::size_t>(users));
  for (int u = 0; u < users; ++u) {
    UserEvaluation& ue = out.users[u];
    ue.user = u;
    ue.nmse.assign(E, 0.0);
    ue.se.assign(E, 0.0);
    ue.rejected.assign(E, 0);
    ue.variance_clamps.assign(E, 0);
    for (std::size_t e = 0; e < E; ++e) {
      if (options.compute_nmse) ue.nmse[e] = nmse_acc[u][e].value();
      if (options.compute_se) {
        const MomentAccumulator& acc = se_acc[u][e];
        ue.rejected[e] = acc.rejected();
        const SinrBreakdown sinr = blind_sinr(acc, u, eta, c.sigma2_dl);
        ue.variance_clamps[e] = sinr.variance_clamped ? 1 : 0;
        ue.se[e] = spectral_efficiency(sinr.sinr(), c.tau_p(), c.tau_c);
      }
    }
    if (options.compute_se) {
      ue.se_perfect = perfect[u].spectral_efficiency(c.tau_p(), c.tau_c);
    }
    ue.se_hardening_closed_form = hardening_se_closed_form(network, u);
  }
  return out;
}

std::vector<double> se_blind(const Network& network, std::uint64_t drop_index,
                             EstimatorKind estimator, std::uint64_t blocks,
                             const MlpModel* model) {
  EvalOptions options;
  options.blocks = blocks;
  options.estimators = {estimator};
  options.model = model;
  options.compute_nmse = false;
  const DropEvaluation eval = evaluate_drop(network, drop_index, options);
  std::vector<double> out;
  for (const auto& u : eval.users) out.push_back(u.se[0]);
  return out;
}

std::vector<double> se_perfect(const Network& network, std::uint64_t drop_index,
                               std::uint64_t blocks) {
  EvalOptions options;
  options.blocks = blocks;
  options.estimators = {EstimatorKind::kHardening};
  options.compute_nmse = false;
  const DropEvaluation eval = evaluate_drop(network, drop_index, options);
  std::vector<double> out;
  for (const auto& u : eval.users) out.push_back(u.se_perfect);
  return out;
}

}  // namespace dlgain
