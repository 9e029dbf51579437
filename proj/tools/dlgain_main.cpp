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

// Command-line front end: simulate, dataset, train, eval, plot.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dlgain/harness.hpp"

namespace {

using dlgain::harness::ScenarioOverrides;

void add_scenario_flags(CLI::App* cmd, ScenarioOverrides& s) {
  cmd->add_option("--config", s.config_path, "Scenario JSON file");
  cmd->add_option("--K", s.K, "Override users per cell (resets eta to 1/K)");
  cmd->add_option("--M", s.M, "Override BS antennas");
  cmd->add_option("--tau-c", s.tau_c, "Override coherence block length");
  cmd->add_option("--seed", s.seed, "Override master seed");
  cmd->add_option("--asd-deg", s.asd_deg, "Override angular standard deviation");
  cmd->add_option("--edge-snr-db", s.edge_snr_db,
                  "Calibrate rho_dl to this median cell-edge DL SNR");
}

}  // namespace

int main(int argc, char** argv) {
  namespace h = dlgain::harness;
  CLI::App app{"Blind downlink effective-gain estimation in multi-cell massive MIMO"};
  app.require_subcommand(1);
  app.set_version_flag("--version", h::version_string());

  h::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo NMSE/SE evaluation");
  add_scenario_flags(simulate, sim.scenario);
  simulate->add_option("--estimators", sim.estimators,
                       "Comma-separated subset of hardening,model,genie,learned");
  simulate->add_option("--model", sim.model_path, "Trained model for the learned estimator");
  simulate->add_option("--drops", sim.drops, "Number of user drops");
  simulate->add_option("--blocks", sim.blocks, "Coherence blocks per drop");
  simulate->add_option("--workers", sim.workers, "Worker threads");
  simulate->add_option("--out", sim.out_dir, "Output directory");
  simulate->add_option("--theta", sim.theta, "Threshold multiplier (>= 1)");
  simulate->add_option("--symbols", sim.symbols, "gaussian or qpsk");
  simulate->add_flag("!--no-nmse", sim.nmse, "Skip NMSE evaluation");
  simulate->add_flag("!--no-se", sim.se, "Skip SE evaluation");
  simulate->add_flag("--se-all-symbols", sim.se_all_symbols,
                     "Average SE moments over every symbol index");

  h::DatasetCommand ds;
  auto* dataset = app.add_subcommand("dataset", "Generate a labeled training set");
  add_scenario_flags(dataset, ds.scenario);
  dataset->add_option("--drops", ds.drops, "Number of drops (one typical user each)");
  dataset->add_option("--blocks", ds.blocks, "Blocks per drop");
  dataset->add_option("--workers", ds.workers, "Worker threads");
  dataset->add_option("--out", ds.out, "Dataset CSV path");

  h::TrainCommand tr;
  auto* train = app.add_subcommand("train", "Train the gain-regression network");
  train->add_option("--dataset", tr.dataset, "Dataset CSV")->required();
  train->add_option("--lr", tr.learning_rate, "Adam learning rate");
  train->add_option("--batch", tr.batch_size, "Mini-batch size");
  train->add_option("--epochs", tr.epochs, "Training epochs");
  train->add_option("--seed", tr.seed, "Initialization/shuffle seed");
  train->add_option("--transform", tr.transform, "Feature transform: log or linear");
  train->add_option("--out", tr.out, "Model JSON path");
  train->add_option("--log", tr.log, "Training log CSV path");

  h::EvalCommand ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a trained model on a dataset");
  eval->add_option("--model", ev.model, "Model JSON")->required();
  eval->add_option("--testset", ev.testset, "Dataset CSV")->required();
  eval->add_option("--out", ev.out, "Predictions CSV path");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for the CDF tables");
  plot->add_option("--dir", plot_dir, "Output directory of a simulate run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kConfigError;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  return h::guarded(
      [&]() -> int {
        if (*simulate) return h::cmd_simulate(sim, out, err);
        if (*dataset) return h::cmd_dataset(ds, out, err);
        if (*train) return h::cmd_train(tr, out, err);
        if (*eval) return h::cmd_eval(ev, out, err);
        return h::cmd_plot(plot_dir, out, err);
      },
      err);
}
