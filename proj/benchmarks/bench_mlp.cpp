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

#include "dlgain/learn.hpp"

namespace {

dlgain::MlpModel make_model() {
  auto rng = dlgain::rng_stream(1, dlgain::stage::kInit);
  return dlgain::MlpModel::create_default(rng);
}

void BM_MlpForward(benchmark::State& state) {
  const auto model = make_model();
  const dlgain::RMatrix x = dlgain::RMatrix::Random(dlgain::kFeatureCount, state.range(0));
  for (auto _ : state) {
    auto y = model.forward_standardized(x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(128)->Arg(4096);

void BM_MlpGradient(benchmark::State& state) {
  const auto model = make_model();
  const dlgain::RMatrix x = dlgain::RMatrix::Random(dlgain::kFeatureCount, state.range(0));
  const dlgain::RVector y = dlgain::RVector::Random(state.range(0));
  for (auto _ : state) {
    auto g = dlgain::gradient(model, x, y);
    benchmark::DoNotOptimize(g.bias.back().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpGradient)->Arg(128);

void BM_AdamStep(benchmark::State& state) {
  auto model = make_model();
  const dlgain::RMatrix x = dlgain::RMatrix::Random(dlgain::kFeatureCount, 128);
  const dlgain::RVector y = dlgain::RVector::Random(128);
  const auto g = dlgain::gradient(model, x, y);
  dlgain::AdamState adam(model, dlgain::AdamConfig{});
  for (auto _ : state) adam.step(model, g);
}
BENCHMARK(BM_AdamStep);

}  // namespace
