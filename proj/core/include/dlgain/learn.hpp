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
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlgain/downlink.hpp"
#include "dlgain/estimators.hpp"
#include "dlgain/rng.hpp"
#include "dlgain/scenario.hpp"
#include "dlgain/types.hpp"

namespace dlgain {

inline constexpr int kFeatureCount = 3;
// Hidden layer widths of the regression network.
inline constexpr std::array<int, 3> kHiddenLayout = {32, 64, 64};

// ---------------------------------------------------------------------------
// Dataset

enum class Split { kTrain, kValidation, kTest };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct DatasetRow {
  Features features{};  // xi_loo, T, eta * rho_dl * beta
  double label = 0.0;   // |alpha_lk^lk|
  std::uint64_t drop_id = 0;
  std::uint64_t block_id = 0;
  Split split = Split::kTrain;

  // In-memory only: baselines for the same row, not part of the CSV.
  double hardening = 0.0;
  double model_aided = 0.0;
};

struct SplitRatios {
  double train = 0.4;
  double validation = 0.1;
  double test = 0.5;
};

struct Dataset {
  std::vector<DatasetRow> rows;
  std::size_t skipped = 0;

  std::size_t count(Split split) const;
  std::vector<const DatasetRow*> select(Split split) const;

  // Header: xi_loo,T,eta_rho_beta,label,drop_id,block_id,split
  void write_csv(const std::filesystem::path& path) const;
  static Dataset read_csv(const std::filesystem::path& path);
};

struct DatasetOptions {
  std::uint64_t drops = 100;
  std::uint64_t blocks = 500;
  SplitRatios ratios;
  unsigned workers = 1;
  double theta = 1.0;
  SymbolModel symbols = SymbolModel::kGaussian;
};

// One typical user (random cell and slot, drawn per drop) per drop; one row
// per block with features at the first data symbol. Rows are shuffled and
// split by the configured ratios. Non-finite rows are skipped and counted.
Dataset generate_dataset(const ScenarioConfig& config, const DatasetOptions& options);

// Index of the typical user of a drop.
int typical_user(const ScenarioConfig& config, std::uint64_t drop_id);

// ---------------------------------------------------------------------------
// Model

enum class FeatureTransform { kLinear, kLog };

std::string_view to_string(FeatureTransform t);
FeatureTransform parse_feature_transform(std::string_view name);

// Per-feature z-scoring (optionally after log10) and label scaling, fitted on
// the training split only.
struct Standardizer {
  FeatureTransform transform = FeatureTransform::kLog;
  RVector mean = RVector::Zero(kFeatureCount);
  RVector scale = RVector::Ones(kFeatureCount);
  double target_mean = 0.0;
  double target_scale = 1.0;

  // features: kFeatureCount x N, one sample per column.
  static Standardizer fit(const RMatrix& features, const RVector& labels,
                          FeatureTransform transform);
  RMatrix apply(const RMatrix& features) const;
  RVector standardize_labels(const RVector& labels) const;
  double restore_label(double standardized) const {
    return target_mean + target_scale * standardized;
  }
};

struct DenseLayer {
  RMatrix weight;  // out x in
  RVector bias;    // out

  std::size_t parameter_count() const {
    return static_cast<std::size_t>(weight.size() + bias.size());
  }
};

struct EpochLoss {
  int epoch = 0;
  double train_mae = 0.0;
  double val_mae = 0.0;
};

struct TrainingMeta {
  int epochs = 0;
  double learning_rate = 0.0;
  int batch_size = 0;
  std::uint64_t seed = 0;
  int best_epoch = 0;
  double best_val_mae = 0.0;
  double final_train_mae = 0.0;
  std::vector<EpochLoss> curve;
};

// Dense network, rectifier hidden units and a single linear output that is
// clamped at zero only when producing an estimate.
class MlpModel {
 public:
  MlpModel() = default;

  // layout = {inputs, hidden..., outputs}. Glorot-uniform weights, zero biases.
  static MlpModel create(std::span<const int> layout, Rng& rng);
  static MlpModel create_default(Rng& rng);

  int input_dim() const;
  std::vector<int> layout() const;
  std::size_t parameter_count() const;

  // Raw network output on standardized inputs (kFeatureCount x N), in
  // standardized label units.
  RVector forward_standardized(const RMatrix& x) const;

  // Estimate of |alpha| for raw features; clamped at zero.
  double predict(std::span<const double> features) const;
  // features: kFeatureCount x N.
  RVector predict_batch(const RMatrix& features) const;

  std::vector<DenseLayer> layers;
  Standardizer standardizer;
  TrainingMeta meta;
};

// Gradient of the mean absolute error with respect to every parameter.
struct Gradients {
  std::vector<RMatrix> weight;
  std::vector<RVector> bias;
};

double mae_loss(const MlpModel& model, const RMatrix& x, const RVector& y);

// Exact backpropagated gradient of mean |output - y| over the batch, on
// standardized inputs x and labels y. Subgradient 0 at every kink.
Gradients gradient(const MlpModel& model, const RMatrix& x, const RVector& y,
                   double* loss = nullptr);

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class AdamState {
 public:
  AdamState(const MlpModel& model, AdamConfig config);

  void step(MlpModel& model, const Gradients& grads);
  long steps() const { return steps_; }
  const AdamConfig& config() const { return config_; }
  const Gradients& first_moment() const { return m_; }
  const Gradients& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  long steps_ = 0;
  Gradients m_;
  Gradients v_;
};

struct TrainOptions {
  double learning_rate = 0.01;
  int batch_size = 128;
  int epochs = 200;
  std::uint64_t seed = 1;
  FeatureTransform transform = FeatureTransform::kLog;
  std::function<void(const EpochLoss&)> on_epoch;
};

// Mini-batch Adam on the training split, keeping the parameters with the best
// validation MAE. Throws NumericError if the loss becomes non-finite.
MlpModel train(const Dataset& dataset, const TrainOptions& options);

void write_training_log(const std::filesystem::path& path, const TrainingMeta& meta);

nlohmann::json model_to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& doc);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

// Helpers for assembling feature matrices from dataset rows.
RMatrix feature_matrix(std::span<const DatasetRow* const> rows);
RVector label_vector(std::span<const DatasetRow* const> rows);

}  // namespace dlgain
