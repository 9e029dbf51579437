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

#include "dlgain/estimators.hpp"
#include "dlgain/learn.hpp"
#include "dlgain/metrics.hpp"
#include "dlgain/network.hpp"

namespace dlgain {

struct EvalOptions {
  std::uint64_t blocks = 2000;
  std::vector<EstimatorKind> estimators = {EstimatorKind::kHardening,
                                           EstimatorKind::kModelAided,
                                           EstimatorKind::kGenie};
  const MlpModel* model = nullptr;  // required when kLearned is selected
  SymbolModel symbols = SymbolModel::kGaussian;
  bool compute_nmse = true;
  bool compute_se = true;
  // Accumulate the SE moments at every symbol index instead of only the
  // first one.
  bool se_all_symbols = false;
};

struct UserEvaluation {
  int user = 0;
  std::vector<double> nmse;                  // per selected estimator
  std::vector<double> se;                    // blind bound per selected estimator
  std::vector<std::uint64_t> rejected;       // zero-estimate blocks per estimator
  std::vector<std::uint64_t> variance_clamps;
  double se_perfect = 0.0;
  double se_hardening_closed_form = 0.0;
};

struct DropEvaluation {
  std::uint64_t drop = 0;
  std::vector<UserEvaluation> users;
};

// Monte Carlo over blocks of one drop. All estimators see the same blocks.
DropEvaluation evaluate_drop(const Network& network, std::uint64_t drop_index,
                             const EvalOptions& options);

// SE of the hardening estimator evaluated from closed-form second moments:
// SINR = eta rho tr(Phi) / (eta rho tr(Phi R)/tr(Phi) + T).
double hardening_se_closed_form(const Network& network, int user);

// Per-user NMSE and SE bounds over one drop.
std::vector<double> se_blind(const Network& network, std::uint64_t drop_index,
                             EstimatorKind estimator, std::uint64_t blocks,
                             const MlpModel* model = nullptr);
std::vector<double> se_perfect(const Network& network, std::uint64_t drop_index,
                               std::uint64_t blocks);

// Fraction of rejected blocks above which an SE value is flagged.
inline constexpr double kRejectionFlagFraction = 0.01;

}  // namespace dlgain
