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

#include "dlgain/harness.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>

#include "dlgain/parallel.hpp"

#ifndef DLGAIN_VERSION
#define DLGAIN_VERSION "0.0.0"
#endif

namespace dlgain::harness {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json stage_seeds(std::uint64_t master) {
  return {{"master", master},
          {"streams",
           {std::string(stage::kDrop), std::string(stage::kTypicalUser),
            std::string(stage::kChannel), std::string(stage::kPilotNoise),
            std::string(stage::kSymbols), std::string(stage::kDownlinkNoise),
            std::string(stage::kSplit)}},
          {"derivation", "splitmix64(seed, stage, drop, block)"}};
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

}  // namespace

fs::path default_output_dir() {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
    return env;
  }
  return "dlgain-out";
}

std::string version_string() { return std::string("dlgain ") + DLGAIN_VERSION; }

nlohmann::json RunManifest::to_json() const {
  return {{"command", command}, {"version", version},   {"config", config},
          {"options", options}, {"seeds", seeds},       {"started_at", started_at},
          {"finished_at", finished_at}, {"outputs", outputs}};
}

void RunManifest::write(const fs::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write manifest " + path.string());
  out << to_json().dump(2) << '\n';
}

ScenarioConfig ScenarioOverrides::resolve() const {
  ScenarioConfig c = config_path ? ScenarioConfig::load(*config_path) : ScenarioConfig{};
  if (K) {
    c.K = *K;
    c.eta.clear();
  }
  if (M) c.M = *M;
  if (tau_c) c.tau_c = *tau_c;
  if (seed) c.seed = *seed;
  if (asd_deg) c.asd_deg = *asd_deg;
  if (edge_snr_db) c.rho_dl = calibrate_rho_dl(c, *edge_snr_db);
  c.validate();
  return c.resolved();
}

// ---------------------------------------------------------------------------
// simulate

std::vector<double> SimulationReport::nmse_values(std::size_t estimator) const {
  std::vector<double> out;
  for (const auto& d : drops) {
    for (const auto& u : d.users) out.push_back(u.nmse[estimator]);
  }
  return out;
}

std::vector<double> SimulationReport::se_values(std::size_t estimator) const {
  std::vector<double> out;
  for (const auto& d : drops) {
    for (const auto& u : d.users) out.push_back(u.se[estimator]);
  }
  return out;
}

std::vector<double> SimulationReport::se_perfect_values() const {
  std::vector<double> out;
  for (const auto& d : drops) {
    for (const auto& u : d.users) out.push_back(u.se_perfect);
  }
  return out;
}

std::uint64_t SimulationReport::flagged_users() const {
  std::uint64_t flagged = 0;
  for (const auto& d : drops) {
    for (const auto& u : d.users) {
      for (auto r : u.rejected) {
        if (static_cast<double>(r) > kRejectionFlagFraction * static_cast<double>(blocks)) {
          ++flagged;
          break;
        }
      }
    }
  }
  return flagged;
}

SimulationReport run_simulation(const ScenarioConfig& config, const SimulateOptions& options,
                                const MlpModel* model) {
  SimulationReport report;
  report.config = config.resolved();
  report.estimators = parse_estimator_list(options.estimators);
  report.blocks = options.blocks;
  if (options.drops == 0) throw ConfigError("need at least one drop");
  if (options.se && options.blocks < kMinSeBlocks) {
    throw ConfigError("SE evaluation needs at least " + std::to_string(kMinSeBlocks) + " blocks per drop");
  }

  EvalOptions eval;
  eval.blocks = options.blocks;
  eval.estimators = report.estimators;
  eval.model = model;
  eval.symbols = parse_symbol_model(options.symbols);
  eval.compute_nmse = options.nmse;
  eval.compute_se = options.se;
  eval.se_all_symbols = options.se_all_symbols;

  report.drops.resize(options.drops);
  parallel_for(options.drops, options.workers, [&](std::size_t d) {
    const Network net = Network::generate(report.config, d, options.theta);
    report.drops[d] = evaluate_drop(net, d, eval);
  });
  return report;
}

namespace {

std::uint64_t global_user(const SimulationReport& r, std::uint64_t drop, int user) {
  return drop * static_cast<std::uint64_t>(r.config.users()) + static_cast<std::uint64_t>(user);
}

}  // namespace

std::vector<fs::path> write_report(const SimulationReport& report, const fs::path& dir) {
  ensure_dir(dir);
  std::vector<fs::path> written;
  const auto& kinds = report.estimators;
  const bool has_nmse = !report.drops.empty() && !report.drops[0].users.empty() &&
                        !report.drops[0].users[0].nmse.empty();

  {
    const fs::path p = dir / "nmse.csv";
    std::ofstream out(p);
    out << "user,estimator,nmse\n" << std::setprecision(17);
    for (const auto& d : report.drops) {
      for (const auto& u : d.users) {
        for (std::size_t e = 0; e < kinds.size(); ++e) {
          out << global_user(report, d.drop, u.user) << ',' << to_string(kinds[e]) << ','
              << u.nmse[e] << '\n';
        }
      }
    }
    written.push_back(p);
  }
  {
    const fs::path p = dir / "se.csv";
    std::ofstream out(p);
    out << "user,method,se_bps_hz\n" << std::setprecision(17);
    for (const auto& d : report.drops) {
      for (const auto& u : d.users) {
        const auto id = global_user(report, d.drop, u.user);
        for (std::size_t e = 0; e < kinds.size(); ++e) {
          out << id << ',' << to_string(kinds[e]) << ',' << u.se[e] << '\n';
        }
        out << id << ",perfect," << u.se_perfect << '\n';
      }
    }
    written.push_back(p);
  }

  for (std::size_t e = 0; e < kinds.size(); ++e) {
    const std::string name(to_string(kinds[e]));
    if (has_nmse) {
      const fs::path p = dir / ("cdf_nmse_" + name + ".csv");
      write_cdf_csv(p, cdf(report.nmse_values(e)));
      written.push_back(p);
    }
    const fs::path p = dir / ("cdf_se_" + name + ".csv");
    write_cdf_csv(p, cdf(report.se_values(e)));
    written.push_back(p);
  }
  {
    const fs::path p = dir / "cdf_se_perfect.csv";
    write_cdf_csv(p, cdf(report.se_perfect_values()));
    written.push_back(p);
  }
  written.push_back(write_plot_script(dir));
  return written;
}

fs::path write_plot_script(const fs::path& dir) {
  std::set<std::string> nmse_files;
  std::set<std::string> se_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("cdf_nmse_", 0) == 0 && entry.path().extension() == ".csv") {
      nmse_files.insert(name);
    } else if (name.rfind("cdf_se_", 0) == 0 && entry.path().extension() == ".csv") {
      se_files.insert(name);
    }
  }
  auto label = [](const std::string& file, std::size_t prefix) {
    return file.substr(prefix, file.size() - prefix - 4);
  };
  const fs::path p = dir / "plot.gp";
  std::ofstream out(p);
  out << "# gnuplot script; run from this directory: gnuplot plot.gp\n"
      << "set datafile separator ','\n"
      << "set key bottom right\n"
      << "set ylabel 'CDF'\n"
      << "set terminal pngcairo size 800,600\n";
  if (!nmse_files.empty()) {
    out << "set output 'cdf_nmse.png'\nset logscale x\nset xlabel 'NMSE'\nplot ";
    bool first = true;
    for (const auto& f : nmse_files) {
      out << (first ? "" : ", \\\n     ") << "'" << f << "' using 1:2 every ::1 with steps title '"
          << label(f, 9) << "'";
      first = false;
    }
    out << "\nunset logscale x\n";
  }
  if (!se_files.empty()) {
    out << "set output 'cdf_se.png'\nset xlabel 'SE per user [b/s/Hz]'\nplot ";
    bool first = true;
    for (const auto& f : se_files) {
      out << (first ? "" : ", \\\n     ") << "'" << f << "' using 1:2 every ::1 with steps title '"
          << label(f, 7) << "'";
      first = false;
    }
    out << '\n';
  }
  return p;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  RunManifest manifest;
  manifest.command = "simulate";
  manifest.version = version_string();
  manifest.started_at = utc_now();

  const ScenarioConfig config = options.scenario.resolve();
  const auto kinds = parse_estimator_list(options.estimators);
  std::optional<MlpModel> model;
  for (auto k : kinds) {
    if (k == EstimatorKind::kLearned) {
      if (!options.model_path) throw ConfigError("--estimators learned requires --model");
      if (!fs::exists(*options.model_path)) {
        throw ConfigError("model file not found: " + options.model_path->string());
      }
      model = load_model(*options.model_path);
    }
  }

  const SimulationReport report =
      run_simulation(config, options, model ? &*model : nullptr);
  const fs::path dir = options.out_dir.value_or(default_output_dir());
  const auto written = write_report(report, dir);

  manifest.config = config.to_json();
  manifest.options = {{"estimators", options.estimators},
                      {"drops", options.drops},
                      {"blocks", options.blocks},
                      {"workers", options.workers},
                      {"theta", options.theta},
                      {"symbols", options.symbols},
                      {"nmse", options.nmse},
                      {"se", options.se},
                      {"se_all_symbols", options.se_all_symbols},
                      {"model", options.model_path ? options.model_path->string() : ""}};
  manifest.seeds = stage_seeds(config.seed);
  for (const auto& p : written) manifest.outputs.push_back(p.filename().string());
  manifest.finished_at = utc_now();
  manifest.write(dir / "manifest.json");

  out << std::setprecision(5);
  out << "users evaluated: " << report.drops.size() * static_cast<std::size_t>(config.users())
      << " (" << report.drops.size() << " drops x " << config.users() << ")\n";
  for (std::size_t e = 0; e < kinds.size(); ++e) {
    out << to_string(kinds[e]) << ":";
    if (options.nmse) out << " mean NMSE " << mean(report.nmse_values(e));
    if (options.se) out << "  mean SE " << mean(report.se_values(e)) << " b/s/Hz";
    out << '\n';
  }
  if (options.se) out << "perfect: mean SE " << mean(report.se_perfect_values()) << " b/s/Hz\n";

  for (const auto& d : report.drops) {
    for (const auto& u : d.users) {
      for (std::size_t e = 0; e < kinds.size(); ++e) {
        const double frac = static_cast<double>(u.rejected[e]) / static_cast<double>(options.blocks);
        if (frac > kRejectionFlagFraction) {
          err << "warning: drop " << d.drop << " user " << u.user << " estimator "
              << to_string(kinds[e]) << " rejected " << frac * 100.0 << "% of blocks\n";
        }
      }
    }
  }
  out << "outputs written to " << dir.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// dataset / train / eval / plot

int cmd_dataset(const DatasetCommand& options, std::ostream& out, std::ostream&) {
  RunManifest manifest;
  manifest.command = "dataset";
  manifest.version = version_string();
  manifest.started_at = utc_now();

  const ScenarioConfig config = options.scenario.resolve();
  DatasetOptions ds_options;
  ds_options.drops = options.drops;
  ds_options.blocks = options.blocks;
  ds_options.workers = options.workers;
  const Dataset ds = generate_dataset(config, ds_options);

  const fs::path path = options.out.value_or(default_output_dir() / "dataset.csv");
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  ds.write_csv(path);

  manifest.config = config.to_json();
  manifest.options = {{"drops", options.drops},
                      {"blocks", options.blocks},
                      {"workers", options.workers},
                      {"ratios", {0.4, 0.1, 0.5}}};
  manifest.seeds = stage_seeds(config.seed);
  manifest.outputs = {path.filename().string()};
  manifest.finished_at = utc_now();
  fs::path manifest_path = path;
  manifest_path.replace_extension(".manifest.json");
  manifest.write(manifest_path);

  out << "rows: " << ds.rows.size() << " (train " << ds.count(Split::kTrain) << ", val "
      << ds.count(Split::kValidation) << ", test " << ds.count(Split::kTest)
      << "), skipped " << ds.skipped << "\nwritten to " << path.string() << '\n';
  return kOk;
}

int cmd_train(const TrainCommand& options, std::ostream& out, std::ostream&) {
  RunManifest manifest;
  manifest.command = "train";
  manifest.version = version_string();
  manifest.started_at = utc_now();

  const Dataset ds = Dataset::read_csv(options.dataset);
  TrainOptions t;
  t.learning_rate = options.learning_rate;
  t.batch_size = options.batch_size;
  t.epochs = options.epochs;
  t.seed = options.seed;
  t.transform = parse_feature_transform(options.transform);
  const MlpModel model = train(ds, t);

  const fs::path model_path = options.out.value_or(default_output_dir() / "model.json");
  if (model_path.has_parent_path()) ensure_dir(model_path.parent_path());
  save_model(model, model_path);
  fs::path log_path = options.log.value_or(model_path.parent_path() / "train_log.csv");
  write_training_log(log_path, model.meta);

  manifest.options = {{"dataset", options.dataset.string()},
                      {"learning_rate", options.learning_rate},
                      {"batch_size", options.batch_size},
                      {"epochs", options.epochs},
                      {"transform", options.transform}};
  manifest.seeds = {{"master", options.seed}, {"streams", {"init", "shuffle"}}};
  manifest.outputs = {model_path.filename().string(), log_path.filename().string()};
  manifest.finished_at = utc_now();
  fs::path manifest_path = model_path;
  manifest_path.replace_extension(".manifest.json");
  manifest.write(manifest_path);

  out << std::setprecision(6) << "best validation MAE " << model.meta.best_val_mae
      << " at epoch " << model.meta.best_epoch << " of " << model.meta.epochs
      << "\nmodel written to " << model_path.string() << '\n';
  return kOk;
}

int cmd_eval(const EvalCommand& options, std::ostream& out, std::ostream&) {
  if (!fs::exists(options.model)) {
    throw ConfigError("model file not found: " + options.model.string());
  }
  const MlpModel model = load_model(options.model);
  const Dataset ds = Dataset::read_csv(options.testset);

  std::vector<const DatasetRow*> rows = ds.select(Split::kTest);
  if (rows.empty()) {
    for (const auto& r : ds.rows) rows.push_back(&r);
  }
  if (rows.empty()) throw ConfigError("test set is empty");
  const RVector pred = model.predict_batch(feature_matrix(rows));

  std::vector<double> est(rows.size());
  std::vector<double> truth(rows.size());
  std::vector<std::uint64_t> groups(rows.size());
  std::vector<Complex> truth_c(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    est[i] = pred[static_cast<Eigen::Index>(i)];
    truth[i] = rows[i]->label;
    truth_c[i] = rows[i]->label;
    groups[i] = rows[i]->drop_id;
  }

  const fs::path path = options.out.value_or(default_output_dir() / "predictions.csv");
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  {
    std::ofstream csv(path);
    if (!csv) throw ConfigError("cannot write " + path.string());
    csv << "drop_id,block_id,label,prediction\n" << std::setprecision(17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      csv << rows[i]->drop_id << ',' << rows[i]->block_id << ',' << truth[i] << ','
          << est[i] << '\n';
    }
  }
  const auto per_drop = grouped_nmse(est, truth, groups);
  out << std::setprecision(6) << "rows: " << rows.size() << "\npooled NMSE: " << nmse(est, truth_c)
      << "\nmean per-drop NMSE: " << mean(per_drop) << " over " << per_drop.size()
      << " drops\npredictions written to " << path.string() << '\n';
  return kOk;
}

int cmd_plot(const fs::path& dir, std::ostream& out, std::ostream&) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  const fs::path p = write_plot_script(dir);
  out << "plot script written to " << p.string() << '\n';
  return kOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const DomainError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace dlgain::harness
