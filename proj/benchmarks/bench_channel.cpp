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

#include <numbers>

#include <benchmark/benchmark.h>

#include "dlgain/channel.hpp"

namespace {

constexpr double kSevenDegrees = 7.0 * std::numbers::pi / 180.0;

void BM_LocalScatteringFactorization(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto corr = dlgain::local_scattering(1e-11, 0.4, kSevenDegrees, M);
    benchmark::DoNotOptimize(corr.sqrt_factor.data());
  }
  state.SetComplexityN(M);
}
BENCHMARK(BM_LocalScatteringFactorization)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_SampleChannel(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto corr = dlgain::local_scattering(1e-11, 0.4, kSevenDegrees, M);
  auto rng = dlgain::rng_stream(1, dlgain::stage::kChannel);
  dlgain::ComplexNormal normal;
  dlgain::CVector z, g(M);
  for (auto _ : state) {
    dlgain::sample_channel(corr, rng, normal, z, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_SampleChannel)->Arg(16)->Arg(64);

}  // namespace
