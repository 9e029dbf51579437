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
#include <random>
#include <string_view>

#include "dlgain/types.hpp"

namespace dlgain {

using Rng = std::mt19937_64;

// Stage labels used by the simulator. Each stage draws from its own stream so
// that enabling or disabling one stage never shifts the draws of another.
namespace stage {
inline constexpr std::string_view kDrop = "drop";
inline constexpr std::string_view kTypicalUser = "typical-user";
inline constexpr std::string_view kChannel = "channel";
inline constexpr std::string_view kPilotNoise = "pilot-noise";
inline constexpr std::string_view kSymbols = "symbols";
inline constexpr std::string_view kDownlinkNoise = "dl-noise";
inline constexpr std::string_view kSplit = "split";
inline constexpr std::string_view kInit = "init";
inline constexpr std::string_view kShuffle = "shuffle";
}  // namespace stage

// Deterministic substream for (master seed, stage, index, sub-index).
// Distinct tuples give statistically independent generators.
Rng rng_stream(std::uint64_t master_seed, std::string_view stage,
               std::uint64_t index = 0, std::uint64_t sub_index = 0);

std::uint64_t splitmix64(std::uint64_t x);

// Circularly-symmetric complex normal CN(0, 1): real and imaginary parts are
// independent N(0, 1/2).
class ComplexNormal {
 public:
  Complex operator()(Rng& rng) { return {normal_(rng), normal_(rng)}; }

  void fill(Rng& rng, CVector& out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = (*this)(rng);
  }

 private:
  std::normal_distribution<double> normal_{0.0, 0.7071067811865476};
};

}  // namespace dlgain
