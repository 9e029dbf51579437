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

#include "dlgain/network.hpp"

#include "dlgain/rng.hpp"

namespace dlgain {

Network::Network(const ScenarioConfig& config, UserDrop drop, double theta)
    : config_(config.resolved()),
      drop_(std::move(drop)),
      plan_(assign_pilots(config_)),
      bank_(config_, drop_),
      uplink_(config_, plan_, bank_),
      profiles_(interference_profiles(config_, plan_, drop_, bank_, uplink_,
                                      *config_.rho_dl, theta)) {}

Network Network::generate(const ScenarioConfig& config, std::uint64_t drop_index,
                          double theta) {
  config.validate();
  Rng rng = rng_stream(config.seed, stage::kDrop, drop_index);
  UserDrop drop = drop_users(config, build_grid(config), rng);
  return Network(config, std::move(drop), theta);
}

BlockSample Network::simulate_block(std::uint64_t drop_index, std::uint64_t block_index,
                                    const BlockOptions& options) const {
  const std::uint64_t seed = config_.seed;
  BlockSample sample;

  Rng channel_rng = rng_stream(seed, stage::kChannel, drop_index, block_index);
  sample.channels = sample_channels(bank_, channel_rng);

  Rng pilot_rng = rng_stream(seed, stage::kPilotNoise, drop_index, block_index);
  sample.estimates = estimate_channels(config_, plan_, uplink_, sample.channels, pilot_rng);
  sample.precoders = mr_precoders(sample.estimates, uplink_);
  sample.gains = effective_gains(config_, sample.channels, sample.precoders, rho_dl());

  if (options.synthesize) {
    Rng symbol_rng = rng_stream(seed, stage::kSymbols, drop_index, block_index);
    Rng noise_rng = rng_stream(seed, stage::kDownlinkNoise, drop_index, block_index);
    sample.received =
        synthesize_block(config_, sample.gains, symbol_rng, noise_rng, options.symbols);
  }
  return sample;
}

}  // namespace dlgain
