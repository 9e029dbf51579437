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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dlgain/learn.hpp"

namespace dlgain::testing {

inline RVector flatten(const MlpModel& m) {
  RVector out(static_cast<Eigen::Index>(m.parameter_count()));
  Eigen::Index pos = 0;
  for (const auto& l : m.layers) {
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) out[pos++] = l.weight.data()[i];
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) out[pos++] = l.bias[i];
  }
  return out;
}

inline RVector flatten(const Gradients& g) {
  Eigen::Index n = 0;
  for (std::size_t i = 0; i < g.weight.size(); ++i) n += g.weight[i].size() + g.bias[i].size();
  RVector out(n);
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < g.weight.size(); ++i) {
    for (Eigen::Index j = 0; j < g.weight[i].size(); ++j) out[pos++] = g.weight[i].data()[j];
    for (Eigen::Index j = 0; j < g.bias[i].size(); ++j) out[pos++] = g.bias[i][j];
  }
  return out;
}

inline void unflatten(const RVector& p, MlpModel& m) {
  Eigen::Index pos = 0;
  for (auto& l : m.layers) {
    for (Eigen::Index i = 0; i < l.weight.size(); ++i) l.weight.data()[i] = p[pos++];
    for (Eigen::Index i = 0; i < l.bias.size(); ++i) l.bias[i] = p[pos++];
  }
}

// Signs of every hidden pre-activation and every residual: the piecewise
// linear region the loss is in.
inline std::vector<bool> activation_pattern(const MlpModel& m, const RMatrix& x,
                                            const RVector& y) {
  std::vector<bool> out;
  RMatrix h = x;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    RMatrix z = m.layers[i].weight * h;
    z.colwise() += m.layers[i].bias;
    if (i + 1 < m.layers.size()) {
      for (Eigen::Index j = 0; j < z.size(); ++j) out.push_back(z.data()[j] > 0.0);
      h = z.cwiseMax(0.0);
    } else {
      for (Eigen::Index j = 0; j < z.cols(); ++j) out.push_back(z(0, j) > y[j]);
    }
  }
  return out;
}

struct SliceCheck {
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

// Directional derivatives along random unit directions, compared with central
// differences. Directions whose +-h probes leave the current linear region
// are redrawn.
inline std::vector<SliceCheck> check_gradient_slices(std::uint64_t seed, int slices,
                                                     double h = 1e-6, int batch = 64) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MlpModel model = MlpModel::create_default(rng);
  RMatrix x(kFeatureCount, batch);
  RVector y(batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = normal(rng);

  const RVector theta = flatten(model);
  const RVector grad = flatten(gradient(model, x, y));
  const auto base_pattern = activation_pattern(model, x, y);

  std::vector<SliceCheck> out;
  MlpModel probe = model;
  int attempts = 0;
  while (static_cast<int>(out.size()) < slices && attempts++ < 1000 * slices) {
    RVector d(theta.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
    d.normalize();
    unflatten(theta + h * d, probe);
    const double up = mae_loss(probe, x, y);
    const bool up_ok = activation_pattern(probe, x, y) == base_pattern;
    unflatten(theta - h * d, probe);
    const double down = mae_loss(probe, x, y);
    const bool down_ok = activation_pattern(probe, x, y) == base_pattern;
    if (!up_ok || !down_ok) continue;
    SliceCheck s;
    s.analytic = grad.dot(d);
    s.numeric = (up - down) / (2.0 * h);
    const double scale = std::max(std::abs(s.analytic), std::abs(s.numeric));
    s.relative_error = scale > 0.0 ? std::abs(s.analytic - s.numeric) / scale : 0.0;
    out.push_back(s);
  }
  return out;
}

}  // namespace dlgain::testing
