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

#include <string_view>
#include <vector>

#include "dlgain/rng.hpp"
#include "dlgain/scenario.hpp"
#include "dlgain/types.hpp"
#include "dlgain/uplink.hpp"

namespace dlgain {

// MR precoder normalized by the statistical estimate energy,
// w = g_hat / sqrt(E{||g_hat||^2}) = g_hat / sqrt(tr(Phi)).
CVector mr_precoder(const CVector& g_hat, double trace_phi);

std::vector<CVector> mr_precoders(const ChannelEstimate& estimates,
                                  const UplinkStatistics& stats);

// alpha_{obs}^{src} = sqrt(rho_dl) (g^{bs(src)}_{obs})^H w_{src} for every
// observer user and source user of the block.
class EffectiveGains {
 public:
  EffectiveGains() = default;
  explicit EffectiveGains(int users)
      : users_(users), alpha_(CMatrix::Zero(users, users)) {}

  int users() const { return users_; }
  Complex operator()(int observer, int source) const { return alpha_(observer, source); }
  Complex& operator()(int observer, int source) { return alpha_(observer, source); }
  const CMatrix& matrix() const { return alpha_; }

  Complex own(int user) const { return alpha_(user, user); }

  // sum over sources of eta_src |alpha|^2, optionally skipping the observer.
  double weighted_power(const ScenarioConfig& config, int observer,
                        bool include_own) const;

 private:
  int users_ = 0;
  CMatrix alpha_;
};

EffectiveGains effective_gains(const ScenarioConfig& config, const ChannelSet& channels,
                               const std::vector<CVector>& precoders, double rho_dl);

enum class SymbolModel { kGaussian, kQpsk };

SymbolModel parse_symbol_model(std::string_view name);
std::string_view to_string(SymbolModel model);

// Received DL data samples for all users of one block.
struct ReceivedBlock {
  // y(n, user) and s(n, user) for n = 0 .. tau_c - tau_p - 1.
  CMatrix y;
  CMatrix s;
  // Sample mean power per user.
  RVector xi;

  int samples() const { return static_cast<int>(y.rows()); }
  // Leave-one-out sample power excluding symbol n, from the algebraic identity.
  double xi_loo(int user, int n) const;
};

// Zero-mean unit-power symbols: CN(0, 1) or QPSK.
void draw_symbols(SymbolModel model, Rng& rng, CMatrix& out);

ReceivedBlock synthesize_block(const ScenarioConfig& config, const EffectiveGains& gains,
                               Rng& symbol_rng, Rng& noise_rng,
                               SymbolModel model = SymbolModel::kGaussian);

}  // namespace dlgain
