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

#include "dlgain/learn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "dlgain/network.hpp"
#include "dlgain/parallel.hpp"

namespace dlgain {

// ---------------------------------------------------------------------------
// Dataset

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw FormatError("unknown split tag '" + std::string(name) + "'");
}

std::size_t Dataset::count(Split split) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [split](const DatasetRow& r) { return r.split == split; }));
}

std::vector<const DatasetRow*> Dataset::select(Split split) const {
  std::vector<const DatasetRow*> out;
  for (const auto& r : rows) {
    if (r.split == split) out.push_back(&r);
  }
  return out;
}

void Dataset::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "xi_loo,T,eta_rho_beta,label,drop_id,block_id,split\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.features[0] << ',' << r.features[1] << ',' << r.features[2] << ','
        << r.label << ',' << r.drop_id << ',' << r.block_id << ','
        << to_string(r.split) << '\n';
  }
}

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = line.find(',', start);
    cells.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return cells;
}

double parse_double(std::string_view s, std::size_t line_no) {
  std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad number '" + copy + "'");
  }
  return v;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("line " + std::to_string(line_no) + ": bad integer '" +
                      std::string(s) + "'");
  }
  return v;
}

}  // namespace

Dataset Dataset::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "xi_loo,T,eta_rho_beta,label,drop_id,block_id,split") {
    throw FormatError("dataset " + path.string() + " has an unexpected header");
  }
  Dataset ds;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 7 columns");
    }
    DatasetRow r;
    for (int i = 0; i < 3; ++i) r.features[i] = parse_double(cells[i], line_no);
    r.label = parse_double(cells[3], line_no);
    r.drop_id = parse_u64(cells[4], line_no);
    r.block_id = parse_u64(cells[5], line_no);
    r.split = parse_split(cells[6]);
    ds.rows.push_back(r);
  }
  return ds;
}

int typical_user(const ScenarioConfig& config, std::uint64_t drop_id) {
  Rng rng = rng_stream(config.seed, stage::kTypicalUser, drop_id);
  std::uniform_int_distribution<int> pick(0, config.users() - 1);
  return pick(rng);
}

Dataset generate_dataset(const ScenarioConfig& config, const DatasetOptions& options) {
  config.validate();
  const double ratio_sum =
      options.ratios.train + options.ratios.validation + options.ratios.test;
  if (options.ratios.train <= 0.0 || options.ratios.validation < 0.0 ||
      options.ratios.test < 0.0 || std::abs(ratio_sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be nonnegative and sum to 1");
  }

  struct DropRows {
    std::vector<DatasetRow> rows;
    std::size_t skipped = 0;
  };
  std::vector<DropRows> per_drop(options.drops);
  BlockOptions block_options;
  block_options.symbols = options.symbols;

  parallel_for(options.drops, options.workers, [&](std::size_t d) {
    const Network net = Network::generate(config, d, options.theta);
    const int u = typical_user(config, d);
    const InterferenceProfile& profile = net.profile(u);
    DropRows& out = per_drop[d];
    out.rows.reserve(options.blocks);
    for (std::uint64_t b = 0; b < options.blocks; ++b) {
      const BlockSample sample = net.simulate_block(d, b, block_options);
      DatasetRow row;
      row.features = learned_features(sample.received.xi_loo(u, 0), profile);
      row.label = std::abs(sample.gains.own(u));
      row.drop_id = d;
      row.block_id = b;
      row.hardening = profile.alpha_mean;
      row.model_aided = estimate_model_aided(row.features[0], profile, profile.eta).value;
      const bool finite = std::isfinite(row.label) &&
                          std::all_of(row.features.begin(), row.features.end(),
                                      [](double v) { return std::isfinite(v); });
      if (!finite) {
        ++out.skipped;
        continue;
      }
      out.rows.push_back(row);
    }
  });

  Dataset ds;
  for (auto& d : per_drop) {
    ds.skipped += d.skipped;
    ds.rows.insert(ds.rows.end(), d.rows.begin(), d.rows.end());
  }
  Rng rng = rng_stream(config.seed, stage::kSplit);
  std::shuffle(ds.rows.begin(), ds.rows.end(), rng);
  const std::size_t n = ds.rows.size();
  const auto n_train = static_cast<std::size_t>(std::llround(options.ratios.train * n));
  const auto n_val = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(options.ratios.validation * n)));
  for (std::size_t i = 0; i < n; ++i) {
    ds.rows[i].split = i < n_train            ? Split::kTrain
                       : i < n_train + n_val ? Split::kValidation
                                              : Split::kTest;
  }
  return ds;
}

RMatrix feature_matrix(std::span<const DatasetRow* const> rows) {
  RMatrix x(kFeatureCount, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int f = 0; f < kFeatureCount; ++f) x(f, static_cast<Eigen::Index>(i)) = rows[i]->features[f];
  }
  return x;
}

RVector label_vector(std::span<const DatasetRow* const> rows) {
  RVector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) y[static_cast<Eigen::Index>(i)] = rows[i]->label;
  return y;
}

// ---------------------------------------------------------------------------
// Standardizer

std::string_view to_string(FeatureTransform t) {
  return t == FeatureTransform::kLinear ? "linear" : "log";
}

FeatureTransform parse_feature_transform(std::string_view name) {
  if (name == "linear") return FeatureTransform::kLinear;
  if (name == "log") return FeatureTransform::kLog;
  throw ConfigError("unknown feature transform '" + std::string(name) + "'");
}

namespace {

RMatrix transformed(const RMatrix& features, FeatureTransform t) {
  if (t == FeatureTransform::kLinear) return features;
  // Powers are strictly positive; the floor only guards exact zeros.
  return features.cwiseMax(1e-300).array().log10().matrix();
}

}  // namespace

Standardizer Standardizer::fit(const RMatrix& features, const RVector& labels,
                               FeatureTransform transform) {
  if (features.cols() == 0) throw ConfigError("cannot fit standardizer on no samples");
  Standardizer s;
  s.transform = transform;
  const RMatrix t = transformed(features, transform);
  const double n = static_cast<double>(t.cols());
  s.mean = t.rowwise().mean();
  s.scale.resize(t.rows());
  for (Eigen::Index f = 0; f < t.rows(); ++f) {
    const double var = (t.row(f).array() - s.mean[f]).square().sum() / n;
    const double sd = std::sqrt(var);
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  s.target_mean = labels.mean();
  const double label_sd =
      std::sqrt((labels.array() - s.target_mean).square().sum() / n);
  s.target_scale = label_sd > 0.0 ? label_sd
                   : s.target_mean != 0.0 ? std::abs(s.target_mean)
                                          : 1.0;
  return s;
}

RMatrix Standardizer::apply(const RMatrix& features) const {
  if (features.rows() != mean.size()) {
    throw FormatError("feature dimension " + std::to_string(features.rows()) +
                      " does not match model input " + std::to_string(mean.size()));
  }
  RMatrix t = transformed(features, transform);
  return ((t.colwise() - mean).array().colwise() / scale.array()).matrix();
}

RVector Standardizer::standardize_labels(const RVector& labels) const {
  return ((labels.array() - target_mean) / target_scale).matrix();
}

// ---------------------------------------------------------------------------
// Model

MlpModel MlpModel::create(std::span<const int> layout, Rng& rng) {
  if (layout.size() < 2) throw ConfigError("network layout needs at least two sizes");
  MlpModel model;
  for (std::size_t i = 0; i + 1 < layout.size(); ++i) {
    const int in = layout[i];
    const int out = layout[i + 1];
    if (in < 1 || out < 1) throw ConfigError("layer sizes must be positive");
    const double limit = std::sqrt(6.0 / (in + out));
    std::uniform_real_distribution<double> u(-limit, limit);
    DenseLayer layer;
    layer.weight.resize(out, in);
    // Row-major fill so the draw order is independent of storage order.
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = u(rng);
    }
    layer.bias = RVector::Zero(out);
    model.layers.push_back(std::move(layer));
  }
  model.standardizer.mean = RVector::Zero(layout.front());
  model.standardizer.scale = RVector::Ones(layout.front());
  return model;
}

MlpModel MlpModel::create_default(Rng& rng) {
  const std::array<int, 5> layout = {kFeatureCount, kHiddenLayout[0], kHiddenLayout[1],
                                     kHiddenLayout[2], 1};
  return create(layout, rng);
}

int MlpModel::input_dim() const {
  return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols());
}

std::vector<int> MlpModel::layout() const {
  std::vector<int> out;
  if (layers.empty()) return out;
  out.push_back(input_dim());
  for (const auto& l : layers) out.push_back(static_cast<int>(l.weight.rows()));
  return out;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.parameter_count();
  return n;
}

RVector MlpModel::forward_standardized(const RMatrix& x) const {
  if (layers.empty()) throw FormatError("model has no layers");
  if (x.rows() != input_dim()) {
    throw FormatError("input dimension " + std::to_string(x.rows()) +
                      " does not match model input " + std::to_string(input_dim()));
  }
  RMatrix h = x;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    RMatrix z = layers[i].weight * h;
    z.colwise() += layers[i].bias;
    if (i + 1 < layers.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h.row(0).transpose();
}

RVector MlpModel::predict_batch(const RMatrix& features) const {
  const RVector raw = forward_standardized(standardizer.apply(features));
  RVector out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    out[i] = std::max(0.0, standardizer.restore_label(raw[i]));
  }
  return out;
}

double MlpModel::predict(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != input_dim()) {
    throw FormatError("expected " + std::to_string(input_dim()) + " features, got " +
                      std::to_string(features.size()));
  }
  RMatrix x(features.size(), 1);
  for (std::size_t i = 0; i < features.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = features[i];
  return predict_batch(x)[0];
}

// ---------------------------------------------------------------------------
// Gradient

double mae_loss(const MlpModel& model, const RMatrix& x, const RVector& y) {
  return (model.forward_standardized(x) - y).cwiseAbs().mean();
}

Gradients gradient(const MlpModel& model, const RMatrix& x, const RVector& y,
                   double* loss) {
  const std::size_t depth = model.layers.size();
  const double n = static_cast<double>(x.cols());
  if (x.cols() == 0) throw ConfigError("gradient needs a nonempty batch");
  if (y.size() != x.cols()) throw FormatError("label count does not match batch size");

  // Forward pass keeping every pre-activation.
  std::vector<RMatrix> inputs(depth);
  std::vector<RMatrix> pre(depth);
  RMatrix h = x;
  for (std::size_t i = 0; i < depth; ++i) {
    inputs[i] = h;
    pre[i] = model.layers[i].weight * h;
    pre[i].colwise() += model.layers[i].bias;
    h = i + 1 < depth ? pre[i].cwiseMax(0.0) : pre[i];
  }

  const RVector err = h.row(0).transpose() - y;
  if (loss) *loss = err.cwiseAbs().mean();

  RMatrix delta(1, x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double e = err[j];
    delta(0, j) = (e > 0.0 ? 1.0 : e < 0.0 ? -1.0 : 0.0) / n;
  }

  Gradients g;
  g.weight.resize(depth);
  g.bias.resize(depth);
  for (std::size_t i = depth; i-- > 0;) {
    g.weight[i].noalias() = delta * inputs[i].transpose();
    g.bias[i] = delta.rowwise().sum();
    if (i == 0) break;
    RMatrix back = model.layers[i].weight.transpose() * delta;
    // Rectifier derivative, 0 at the kink.
    back.array() *= (pre[i - 1].array() > 0.0).cast<double>();
    delta = std::move(back);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Adam

AdamState::AdamState(const MlpModel& model, AdamConfig config) : config_(config) {
  for (const auto& l : model.layers) {
    m_.weight.push_back(RMatrix::Zero(l.weight.rows(), l.weight.cols()));
    m_.bias.push_back(RVector::Zero(l.bias.size()));
  }
  v_ = m_;
}

void AdamState::step(MlpModel& model, const Gradients& grads) {
  ++steps_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double lr = config_.learning_rate;
  const double eps = config_.epsilon;

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
  };
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    update(model.layers[i].weight, m_.weight[i], v_.weight[i], grads.weight[i]);
    update(model.layers[i].bias, m_.bias[i], v_.bias[i], grads.bias[i]);
  }
}

// ---------------------------------------------------------------------------
// Training

namespace {

double clamped_mae(const MlpModel& model, const RMatrix& features, const RVector& labels) {
  if (labels.size() == 0) return 0.0;
  return (model.predict_batch(features) - labels).cwiseAbs().mean();
}

}  // namespace

MlpModel train(const Dataset& dataset, const TrainOptions& options) {
  if (options.batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (options.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(options.learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");

  const auto train_rows = dataset.select(Split::kTrain);
  const auto val_rows = dataset.select(Split::kValidation);
  if (train_rows.empty() || val_rows.empty()) {
    throw ConfigError("training needs nonempty train and validation splits");
  }

  const RMatrix train_x_raw = feature_matrix(train_rows);
  const RVector train_y_raw = label_vector(train_rows);
  const RMatrix val_x = feature_matrix(val_rows);
  const RVector val_y = label_vector(val_rows);

  Rng init_rng = rng_stream(options.seed, stage::kInit);
  MlpModel model = MlpModel::create_default(init_rng);
  model.standardizer = Standardizer::fit(train_x_raw, train_y_raw, options.transform);
  model.meta.learning_rate = options.learning_rate;
  model.meta.batch_size = options.batch_size;
  model.meta.seed = options.seed;

  const RMatrix train_x = model.standardizer.apply(train_x_raw);
  const RVector train_y = model.standardizer.standardize_labels(train_y_raw);
  const Eigen::Index n = train_x.cols();

  AdamConfig adam_config;
  adam_config.learning_rate = options.learning_rate;
  AdamState adam(model, adam_config);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  MlpModel best = model;
  best.meta.best_val_mae = clamped_mae(model, val_x, val_y);
  double best_val = best.meta.best_val_mae;

  RMatrix bx;
  RVector by;
  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    Rng shuffle_rng = rng_stream(options.seed, stage::kShuffle, static_cast<std::uint64_t>(epoch));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n; start += options.batch_size) {
      const Eigen::Index size = std::min<Eigen::Index>(options.batch_size, n - start);
      bx.resize(kFeatureCount, size);
      by.resize(size);
      for (Eigen::Index j = 0; j < size; ++j) {
        const Eigen::Index idx = order[static_cast<std::size_t>(start + j)];
        bx.col(j) = train_x.col(idx);
        by[j] = train_y[idx];
      }
      double loss = 0.0;
      const Gradients g = gradient(model, bx, by, &loss);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "training diverged at epoch " << epoch << ", sample offset " << start
            << " (loss " << loss << ")";
        throw NumericError(msg.str());
      }
      loss_sum += loss * static_cast<double>(size);
      adam.step(model, g);
    }

    EpochLoss record;
    record.epoch = epoch;
    record.train_mae = loss_sum / static_cast<double>(n) * model.standardizer.target_scale;
    record.val_mae = clamped_mae(model, val_x, val_y);
    if (!std::isfinite(record.val_mae)) {
      throw NumericError("validation loss became non-finite at epoch " +
                         std::to_string(epoch));
    }
    model.meta.curve.push_back(record);
    if (options.on_epoch) options.on_epoch(record);
    if (record.val_mae < best_val) {
      best_val = record.val_mae;
      best.layers = model.layers;
      best.meta.best_epoch = epoch;
    }
  }

  best.meta = TrainingMeta{};
  best.meta.epochs = options.epochs;
  best.meta.learning_rate = options.learning_rate;
  best.meta.batch_size = options.batch_size;
  best.meta.seed = options.seed;
  best.meta.curve = model.meta.curve;
  best.meta.best_val_mae = best_val;
  if (!best.meta.curve.empty()) {
    best.meta.final_train_mae = best.meta.curve.back().train_mae;
    for (const auto& r : best.meta.curve) {
      if (r.val_mae == best_val) {
        best.meta.best_epoch = r.epoch;
        break;
      }
    }
  }
  return best;
}

void write_training_log(const std::filesystem::path& path, const TrainingMeta& meta) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "epoch,train_mae,val_mae\n" << std::setprecision(17);
  for (const auto& r : meta.curve) {
    out << r.epoch << ',' << r.train_mae << ',' << r.val_mae << '\n';
  }
}

// ---------------------------------------------------------------------------
// Persistence

nlohmann::json model_to_json(const MlpModel& model) {
  nlohmann::json doc;
  doc["format"] = "dlgain-mlp";
  doc["version"] = 1;
  doc["layout"] = model.layout();
  doc["hidden_activation"] = "relu";
  doc["output"] = "linear-clamped-at-zero";
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : model.layers) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(l.weight.size()));
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
    }
    layers.push_back({{"rows", l.weight.rows()},
                      {"cols", l.weight.cols()},
                      {"weight", w},
                      {"bias", std::vector<double>(l.bias.data(), l.bias.data() + l.bias.size())}});
  }
  doc["layers"] = layers;
  const auto& s = model.standardizer;
  doc["standardizer"] = {
      {"transform", to_string(s.transform)},
      {"mean", std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size())},
      {"scale", std::vector<double>(s.scale.data(), s.scale.data() + s.scale.size())},
      {"target_mean", s.target_mean},
      {"target_scale", s.target_scale}};
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& r : model.meta.curve) {
    curve.push_back({{"epoch", r.epoch}, {"train_mae", r.train_mae}, {"val_mae", r.val_mae}});
  }
  doc["meta"] = {{"epochs", model.meta.epochs},
                 {"learning_rate", model.meta.learning_rate},
                 {"batch_size", model.meta.batch_size},
                 {"seed", model.meta.seed},
                 {"best_epoch", model.meta.best_epoch},
                 {"best_val_mae", model.meta.best_val_mae},
                 {"final_train_mae", model.meta.final_train_mae},
                 {"curve", curve}};
  return doc;
}

MlpModel model_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "dlgain-mlp") {
      throw FormatError("not a dlgain model file");
    }
    if (doc.at("version").get<int>() != 1) throw FormatError("unsupported model version");
    const auto layout = doc.at("layout").get<std::vector<int>>();
    const auto& layers = doc.at("layers");
    if (layout.size() != layers.size() + 1) throw FormatError("layout/layers mismatch");

    MlpModel model;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const auto& jl = layers[i];
      const int rows = jl.at("rows").get<int>();
      const int cols = jl.at("cols").get<int>();
      if (rows != layout[i + 1] || cols != layout[i]) {
        throw FormatError("layer " + std::to_string(i) + " shape disagrees with layout");
      }
      const auto w = jl.at("weight").get<std::vector<double>>();
      const auto b = jl.at("bias").get<std::vector<double>>();
      if (w.size() != static_cast<std::size_t>(rows) * cols ||
          b.size() != static_cast<std::size_t>(rows)) {
        throw FormatError("layer " + std::to_string(i) + " has wrong parameter count");
      }
      DenseLayer layer;
      layer.weight.resize(rows, cols);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) layer.weight(r, c) = w[static_cast<std::size_t>(r) * cols + c];
      }
      layer.bias = Eigen::Map<const RVector>(b.data(), rows);
      model.layers.push_back(std::move(layer));
    }
    if (layout.back() != 1) throw FormatError("model must have a single output");

    const auto& js = doc.at("standardizer");
    Standardizer s;
    s.transform = parse_feature_transform(js.at("transform").get<std::string>());
    const auto mean = js.at("mean").get<std::vector<double>>();
    const auto scale = js.at("scale").get<std::vector<double>>();
    if (mean.size() != static_cast<std::size_t>(layout.front()) || scale.size() != mean.size()) {
      throw FormatError("standardizer dimension disagrees with layout");
    }
    for (double v : scale) {
      if (!(v > 0.0)) throw FormatError("standardizer scale must be > 0");
    }
    s.mean = Eigen::Map<const RVector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
    s.scale = Eigen::Map<const RVector>(scale.data(), static_cast<Eigen::Index>(scale.size()));
    s.target_mean = js.at("target_mean").get<double>();
    s.target_scale = js.at("target_scale").get<double>();
    if (!(s.target_scale > 0.0)) throw FormatError("target scale must be > 0");
    model.standardizer = s;

    if (doc.contains("meta")) {
      const auto& jm = doc.at("meta");
      model.meta.epochs = jm.value("epochs", 0);
      model.meta.learning_rate = jm.value("learning_rate", 0.0);
      model.meta.batch_size = jm.value("batch_size", 0);
      model.meta.seed = jm.value("seed", std::uint64_t{0});
      model.meta.best_epoch = jm.value("best_epoch", 0);
      model.meta.best_val_mae = jm.value("best_val_mae", 0.0);
      model.meta.final_train_mae = jm.value("final_train_mae", 0.0);
      if (jm.contains("curve")) {
        for (const auto& r : jm.at("curve")) {
          model.meta.curve.push_back({r.at("epoch").get<int>(), r.at("train_mae").get<double>(),
                                      r.at("val_mae").get<double>()});
        }
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed model document: ") + e.what());
  }
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write model file " + path.string());
  out << model_to_json(model).dump(1) << '\n';
}

MlpModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed model file " + path.string() + ": " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace dlgain
