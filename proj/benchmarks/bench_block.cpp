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

#include <benchmark/benchmark.h>

#include "dlgain/experiment.hpp"
#include "dlgain/network.hpp"

namespace {

// One coherence block of the default 4-cell network: channels, estimates,
// precoders, gains and, optionally, the received data samples.
void BM_SimulateBlock(benchmark::State& state) {
  dlgain::ScenarioConfig c;
  c.M = static_cast<int>(state.range(0));
  const auto net = dlgain::Network::generate(c.resolved(), 0);
  const dlgain::BlockOptions options{.synthesize = state.range(1) != 0};
  std::uint64_t block = 0;
  for (auto _ : state) {
    auto s = net.simulate_block(0, block++, options);
    benchmark::DoNotOptimize(s.gains.matrix().data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulateBlock)
    ->ArgsProduct({{16, 64}, {0, 1}})
    ->ArgNames({"M", "synth"})
    ->Unit(benchmark::kMicrosecond);

void BM_NetworkSetup(benchmark::State& state) {
  dlgain::ScenarioConfig c;
  c.M = static_cast<int>(state.range(0));
  c = c.resolved();
  std::uint64_t drop = 0;
  for (auto _ : state) {
    auto net = dlgain::Network::generate(c, drop++);
    benchmark::DoNotOptimize(net.profile(0).T);
  }
}
BENCHMARK(BM_NetworkSetup)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EvaluateDrop(benchmark::State& state) {
  dlgain::ScenarioConfig c;
  c.M = 64;
  const auto net = dlgain::Network::generate(c.resolved(), 0);
  dlgain::EvalOptions opt;
  opt.blocks = 100;
  for (auto _ : state) {
    auto eval = dlgain::evaluate_drop(net, 0, opt);
    benchmark::DoNotOptimize(eval.users.data());
  }
  state.SetItemsProcessed(state.iterations() * opt.blocks);
}
BENCHMARK(BM_EvaluateDrop)->Unit(benchmark::kMillisecond);

}  // namespace
