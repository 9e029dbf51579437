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

#include "dlgain/downlink.hpp"

#include <cmath>
#include <string>

namespace dlgain {

CVector mr_precoder(const CVector& g_hat, double trace_phi) {
  if (!(trace_phi > 0.0)) {
    throw NumericError("MR precoder undefined: estimate covariance has zero trace");
  }
  return g_hat / std::sqrt(trace_phi);
}

std::vector<CVector> mr_precoders(const ChannelEstimate& estimates,
                                  const UplinkStatistics& stats) {
  std::vector<CVector> w;
  w.reserve(estimates.g_hat.size());
  for (std::size_t u = 0; u < estimates.g_hat.size(); ++u) {
    w.push_back(mr_precoder(estimates.g_hat[u], stats.at(static_cast<int>(u)).trace_phi));
  }
  return w;
}

double EffectiveGains::weighted_power(const ScenarioConfig& config, int observer,
                                      bool include_own) const {
  double sum = 0.0;
  for (int src = 0; src < users_; ++src) {
    if (!include_own && src == observer) continue;
    sum += config.eta_of(src / config.K, src % config.K) * std::norm(alpha_(observer, src));
  }
  return sum;
}

EffectiveGains effective_gains(const ScenarioConfig& config, const ChannelSet& channels,
                               const std::vector<CVector>& precoders, double rho_dl) {
  const int users = config.users();
  const double amp = std::sqrt(rho_dl);
  EffectiveGains gains(users);
  for (int obs = 0; obs < users; ++obs) {
    for (int src = 0; src < users; ++src) {
      const int bs = src / config.K;
      gains(obs, src) = amp * channels.at(bs, obs).dot(precoders[src]);
    }
  }
  return gains;
}

SymbolModel parse_symbol_model(std::string_view name) {
  if (name == "gaussian") return SymbolModel::kGaussian;
  if (name == "qpsk") return SymbolModel::kQpsk;
  throw ConfigError("unknown symbol model '" + std::string(name) + "'");
}

std::string_view to_string(SymbolModel model) {
  return model == SymbolModel::kGaussian ? "gaussian" : "qpsk";
}

double ReceivedBlock::xi_loo(int user, int n) const {
  const double N = samples();
  return (N * xi[user] - std::norm(y(n, user))) / (N - 1.0);
}

void draw_symbols(SymbolModel model, Rng& rng, CMatrix& out) {
  if (model == SymbolModel::kGaussian) {
    ComplexNormal normal;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      for (Eigen::Index r = 0; r < out.rows(); ++r) out(r, c) = normal(rng);
    }
    return;
  }
  constexpr double a = 0.7071067811865476;
  std::uniform_int_distribution<int> quadrant(0, 3);
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const int q = quadrant(rng);
      out(r, c) = Complex((q & 1) ? -a : a, (q & 2) ? -a : a);
    }
  }
}

ReceivedBlock synthesize_block(const ScenarioConfig& config, const EffectiveGains& gains,
                               Rng& symbol_rng, Rng& noise_rng, SymbolModel model) {
  const int N = config.data_symbols();
  if (N < 2) {
    throw ConfigError("tau_c - tau_p must be >= 2 for leave-one-out power");
  }
  const int users = gains.users();

  ReceivedBlock block;
  block.s.resize(N, users);
  draw_symbols(model, symbol_rng, block.s);

  // y(n, obs) = sum_src s(n, src) sqrt(eta_src) alpha(obs, src) + noise.
  CMatrix mix(users, users);
  for (int src = 0; src < users; ++src) {
    const double amp = std::sqrt(config.eta_of(src / config.K, src % config.K));
    for (int obs = 0; obs < users; ++obs) mix(src, obs) = amp * gains(obs, src);
  }
  block.y.resize(N, users);
  ComplexNormal normal;
  const double noise_amp = std::sqrt(config.sigma2_dl);
  for (int obs = 0; obs < users; ++obs) {
    for (int n = 0; n < N; ++n) block.y(n, obs) = noise_amp * normal(noise_rng);
  }
  block.y.noalias() += block.s * mix;
  block.xi = block.y.cwiseAbs2().colwise().mean().transpose();
  return block;
}

}  // namespace dlgain
