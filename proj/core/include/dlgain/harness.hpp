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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlgain/experiment.hpp"
#include "dlgain/learn.hpp"
#include "dlgain/scenario.hpp"

namespace dlgain::harness {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kNumericError = 3 };

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "DLGAIN_OUTPUT_DIR";

std::filesystem::path default_output_dir();
std::string version_string();

// Provenance record written next to every set of outputs.
struct RunManifest {
  std::string command;
  std::string version;
  nlohmann::json config;
  nlohmann::json options;
  nlohmann::json seeds;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

// Common scenario overrides accepted by every command.
struct ScenarioOverrides {
  std::optional<std::filesystem::path> config_path;
  std::optional<int> K;
  std::optional<int> M;
  std::optional<int> tau_c;
  std::optional<std::uint64_t> seed;
  std::optional<double> asd_deg;
  std::optional<double> edge_snr_db;

  ScenarioConfig resolve() const;
};

// Fewest blocks per drop accepted for SE moments.
inline constexpr std::uint64_t kMinSeBlocks = 2000;

struct SimulateOptions {
  ScenarioOverrides scenario;
  std::string estimators = "hardening,model,genie";
  std::optional<std::filesystem::path> model_path;
  std::uint64_t drops = 20;
  std::uint64_t blocks = 2000;
  unsigned workers = 1;
  std::optional<std::filesystem::path> out_dir;
  double theta = 1.0;
  std::string symbols = "gaussian";
  bool nmse = true;
  bool se = true;
  bool se_all_symbols = false;
};

struct SimulationReport {
  ScenarioConfig config;
  std::vector<EstimatorKind> estimators;
  std::vector<DropEvaluation> drops;
  std::uint64_t blocks = 0;

  // Flattened per-user values in (drop, user) order.
  std::vector<double> nmse_values(std::size_t estimator) const;
  std::vector<double> se_values(std::size_t estimator) const;
  std::vector<double> se_perfect_values() const;
  // Users whose zero-estimate rejections exceed kRejectionFlagFraction.
  std::uint64_t flagged_users() const;
};

SimulationReport run_simulation(const ScenarioConfig& config, const SimulateOptions& options,
                                const MlpModel* model);

// Writes nmse.csv, se.csv, cdf_*.csv and plot.gp; returns the written paths.
std::vector<std::filesystem::path> write_report(const SimulationReport& report,
                                                const std::filesystem::path& dir);

// Gnuplot script plotting every cdf_*.csv found in dir.
std::filesystem::path write_plot_script(const std::filesystem::path& dir);

struct DatasetCommand {
  ScenarioOverrides scenario;
  std::uint64_t drops = 100;
  std::uint64_t blocks = 500;
  unsigned workers = 1;
  std::optional<std::filesystem::path> out;
};

struct TrainCommand {
  std::filesystem::path dataset;
  double learning_rate = 0.01;
  int batch_size = 128;
  int epochs = 200;
  std::uint64_t seed = 1;
  std::string transform = "log";
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> log;
};

struct EvalCommand {
  std::filesystem::path model;
  std::filesystem::path testset;
  std::optional<std::filesystem::path> out;
};

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int cmd_dataset(const DatasetCommand& options, std::ostream& out, std::ostream& err);
int cmd_train(const TrainCommand& options, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalCommand& options, std::ostream& out, std::ostream& err);
int cmd_plot(const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

// Runs body and maps exceptions to the exit-code contract.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace dlgain::harness
