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

#include <cstdint>
#include <vector>

#include "dlgain/channel.hpp"
#include "dlgain/downlink.hpp"
#include "dlgain/estimators.hpp"
#include "dlgain/scenario.hpp"
#include "dlgain/uplink.hpp"

namespace dlgain {

struct BlockOptions {
  bool synthesize = true;
  SymbolModel symbols = SymbolModel::kGaussian;
};

// Everything one coherence block produces.
struct BlockSample {
  ChannelSet channels;
  ChannelEstimate estimates;
  std::vector<CVector> precoders;
  EffectiveGains gains;
  ReceivedBlock received;  // empty unless BlockOptions::synthesize
};

// One drop of the network with all drop-static statistics precomputed. It is
// immutable after construction and safe to share across threads.
class Network {
 public:
  Network(const ScenarioConfig& config, UserDrop drop, double theta = 1.0);

  // Draws drop number drop_index from the (seed, "drop", drop_index) stream.
  static Network generate(const ScenarioConfig& config, std::uint64_t drop_index,
                          double theta = 1.0);

  const ScenarioConfig& config() const { return config_; }
  const UserDrop& drop() const { return drop_; }
  const PilotPlan& plan() const { return plan_; }
  const CorrelationBank& correlations() const { return bank_; }
  const UplinkStatistics& uplink() const { return uplink_; }
  const std::vector<InterferenceProfile>& profiles() const { return profiles_; }
  const InterferenceProfile& profile(int user) const { return profiles_[user]; }
  double rho_dl() const { return *config_.rho_dl; }
  int users() const { return config_.users(); }

  // Block block_index of drop drop_index. Channel, pilot-noise, symbol and
  // DL-noise draws come from separate streams keyed by (drop, block).
  BlockSample simulate_block(std::uint64_t drop_index, std::uint64_t block_index,
                             const BlockOptions& options = {}) const;

 private:
  ScenarioConfig config_;
  UserDrop drop_;
  PilotPlan plan_;
  CorrelationBank bank_;
  UplinkStatistics uplink_;
  std::vector<InterferenceProfile> profiles_;
};

}  // namespace dlgain
