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

#include "dlgain/scenario.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>

namespace dlgain {

namespace {

int integer_sqrt(int n) {
  if (n < 0) return -1;
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : -1;
}

}  // namespace

int ScenarioConfig::grid_side() const {
  const int side = integer_sqrt(L);
  if (L < 1 || side < 1) {
    throw ConfigError("L must be a positive perfect square, got " +
                      std::to_string(L));
  }
  return side;
}

double ScenarioConfig::eta_of(int cell, int k) const {
  if (eta.empty()) return 1.0 / K;
  return eta[static_cast<std::size_t>(cell) * K + k];
}

double ScenarioConfig::asd_rad() const {
  return asd_deg * std::numbers::pi / 180.0;
}

void ScenarioConfig::validate() const {
  grid_side();
  if (K < 1) throw ConfigError("K must be >= 1");
  if (M < 1) throw ConfigError("M must be >= 1");
  if (!(area_side > 0.0)) throw ConfigError("area_side must be > 0");
  if (f < 1) throw ConfigError("pilot reuse factor f must be >= 1");
  if (tau_c < 1) throw ConfigError("tau_c must be >= 1");
  if (tau_p() > tau_c) {
    throw ConfigError("tau_p = f*K = " + std::to_string(tau_p()) +
                      " exceeds tau_c = " + std::to_string(tau_c));
  }
  if (rho_dl && !(*rho_dl > 0.0)) throw ConfigError("rho_dl must be > 0");
  if (!(p_hat > 0.0)) throw ConfigError("p_hat must be > 0");
  if (!(sigma2_ul > 0.0) || !(sigma2_dl > 0.0)) {
    throw ConfigError("noise powers must be > 0");
  }
  if (!(min_dist >= 0.0)) throw ConfigError("min_dist must be >= 0");
  if (min_dist >= cell_side() / 2.0) {
    throw ConfigError("min_dist leaves no admissible user positions");
  }
  if (!(shadow_std_db >= 0.0)) throw ConfigError("shadow_std_db must be >= 0");
  if (!(asd_deg >= 0.0)) throw ConfigError("asd_deg must be >= 0");
  if (!eta.empty()) {
    if (eta.size() != static_cast<std::size_t>(L) * K) {
      throw ConfigError("eta must have L*K entries");
    }
    for (int l = 0; l < L; ++l) {
      double sum = 0.0;
      for (int k = 0; k < K; ++k) {
        const double e = eta_of(l, k);
        if (!(e > 0.0) || e > 1.0) {
          throw ConfigError("eta entries must lie in (0, 1]");
        }
        sum += e;
      }
      if (sum > 1.0 + 1e-12) {
        throw ConfigError("sum of eta in cell " + std::to_string(l) +
                          " exceeds 1");
      }
    }
  }
  assign_pilots(*this);
}

double ScenarioConfig::rho_dl_value() const {
  if (!rho_dl) return calibrate_rho_dl(*this, kDefaultEdgeSnrDb);
  return *rho_dl;
}

ScenarioConfig ScenarioConfig::resolved() const {
  ScenarioConfig out = *this;
  out.rho_dl = rho_dl_value();
  return out;
}

nlohmann::json ScenarioConfig::to_json() const {
  nlohmann::json doc;
  doc["L"] = L;
  doc["K"] = K;
  doc["M"] = M;
  doc["area_side"] = area_side;
  doc["tau_c"] = tau_c;
  doc["f"] = f;
  doc["rho_dl"] = rho_dl ? nlohmann::json(*rho_dl) : nlohmann::json(nullptr);
  doc["p_hat"] = p_hat;
  doc["sigma2_ul"] = sigma2_ul;
  doc["sigma2_dl"] = sigma2_dl;
  doc["min_dist"] = min_dist;
  doc["shadow_std_db"] = shadow_std_db;
  doc["asd_deg"] = asd_deg;
  doc["eta"] = eta;
  doc["seed"] = seed;
  return doc;
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& doc) {
  static const std::set<std::string> kKnown = {
      "L",         "K",         "M",        "area_side",     "tau_c",
      "f",         "rho_dl",    "p_hat",    "sigma2_ul",     "sigma2_dl",
      "min_dist",  "shadow_std_db", "asd_deg", "eta",        "seed"};
  if (!doc.is_object()) throw ConfigError("scenario config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }

  ScenarioConfig c;
  try {
    auto take = [&](const char* key, auto& field) {
      if (doc.contains(key)) doc.at(key).get_to(field);
    };
    take("L", c.L);
    take("K", c.K);
    take("M", c.M);
    take("area_side", c.area_side);
    take("tau_c", c.tau_c);
    take("f", c.f);
    if (doc.contains("rho_dl") && !doc.at("rho_dl").is_null()) {
      c.rho_dl = doc.at("rho_dl").get<double>();
    }
    take("p_hat", c.p_hat);
    take("sigma2_ul", c.sigma2_ul);
    take("sigma2_dl", c.sigma2_dl);
    take("min_dist", c.min_dist);
    take("shadow_std_db", c.shadow_std_db);
    take("asd_deg", c.asd_deg);
    if (doc.contains("eta")) {
      const auto& e = doc.at("eta");
      c.eta.clear();
      for (const auto& item : e) {
        if (item.is_array()) {
          for (const auto& v : item) c.eta.push_back(v.get<double>());
        } else {
          c.eta.push_back(item.get<double>());
        }
      }
    }
    take("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config field type: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

std::vector<Point> build_grid(const ScenarioConfig& config) {
  const int side = config.grid_side();
  const double cell = config.area_side / side;
  std::vector<Point> centers;
  centers.reserve(static_cast<std::size_t>(config.L));
  for (int row = 0; row < side; ++row) {
    for (int col = 0; col < side; ++col) {
      centers.push_back({(col + 0.5) * cell, (row + 0.5) * cell});
    }
  }
  return centers;
}

Point wrap_displacement(Point a, Point b, double area_side) {
  Point best{b.x - a.x, b.y - a.y};
  double best_d2 = best.x * best.x + best.y * best.y;
  for (int sx = -1; sx <= 1; ++sx) {
    for (int sy = -1; sy <= 1; ++sy) {
      const double dx = b.x + sx * area_side - a.x;
      const double dy = b.y + sy * area_side - a.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = {dx, dy};
      }
    }
  }
  return best;
}

double wrap_distance(Point a, Point b, double area_side) {
  const Point d = wrap_displacement(a, b, area_side);
  return std::hypot(d.x, d.y);
}

double large_scale_fading_db(double distance_m, double shadow_db) {
  if (!(distance_m >= 1.0)) {
    throw DomainError("path-loss model needs distance >= 1 m, got " +
                      std::to_string(distance_m));
  }
  return -35.0 - 36.7 * std::log10(distance_m) + shadow_db;
}

double large_scale_fading(double distance_m, double shadow_db) {
  return db_to_linear(large_scale_fading_db(distance_m, shadow_db));
}

UserDrop drop_users(const ScenarioConfig& config,
                    const std::vector<Point>& centers, Rng& rng) {
  const int L = config.L;
  const int K = config.K;
  const double half = config.cell_side() / 2.0;

  UserDrop drop;
  drop.L = L;
  drop.K = K;
  drop.positions.reserve(static_cast<std::size_t>(L) * K);

  std::uniform_real_distribution<double> offset(-half, half);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < K; ++k) {
      int attempts = 0;
      Point p;
      do {
        if (++attempts > kDropRetryCap) {
          throw NumericError("user placement exceeded retry cap in cell " +
                             std::to_string(l));
        }
        p = {centers[l].x + offset(rng), centers[l].y + offset(rng)};
      } while (wrap_distance(centers[l], p, config.area_side) < config.min_dist);
      drop.positions.push_back(p);
    }
  }

  const std::size_t pairs = static_cast<std::size_t>(L) * L * K;
  drop.distance.resize(pairs);
  drop.shadow_db.resize(pairs);
  drop.beta.resize(pairs);
  drop.aoa_rad.resize(pairs);

  std::normal_distribution<double> shadow(0.0, config.shadow_std_db);
  for (int bs = 0; bs < L; ++bs) {
    for (int u = 0; u < L * K; ++u) {
      const std::size_t idx = drop.pair(bs, u);
      const Point d = wrap_displacement(centers[bs], drop.positions[u],
                                        config.area_side);
      drop.distance[idx] = std::hypot(d.x, d.y);
      drop.shadow_db[idx] = config.shadow_std_db > 0.0 ? shadow(rng) : 0.0;
      drop.beta[idx] = large_scale_fading(drop.distance[idx], drop.shadow_db[idx]);
      // Array along x: broadside is +y, sin(phi) is the x-component.
      drop.aoa_rad[idx] = std::atan2(d.x, d.y);
    }
  }
  return drop;
}

void UserDrop::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "bs,cell,user,x,y,distance,shadow_db,beta_db,aoa_deg\n";
  out << std::setprecision(17);
  for (int bs = 0; bs < L; ++bs) {
    for (int u = 0; u < users(); ++u) {
      const std::size_t idx = pair(bs, u);
      out << bs << ',' << u / K << ',' << u % K << ',' << positions[u].x << ','
          << positions[u].y << ',' << distance[idx] << ',' << shadow_db[idx]
          << ',' << linear_to_db(beta[idx]) << ','
          << aoa_rad[idx] * 180.0 / std::numbers::pi << '\n';
    }
  }
}

PilotPlan assign_pilots(const ScenarioConfig& config) {
  const int side = config.grid_side();
  const int L = config.L;
  const int f = config.f;

  PilotPlan plan;
  plan.L = L;
  plan.K = config.K;
  plan.f = f;
  plan.group_of_cell.resize(static_cast<std::size_t>(L));

  const int q = integer_sqrt(f);
  if (f == 2 && side % 2 == 0) {
    for (int l = 0; l < L; ++l) plan.group_of_cell[l] = (l / side + l % side) % 2;
  } else if (q > 0 && side % q == 0) {
    for (int l = 0; l < L; ++l) {
      const int row = l / side;
      const int col = l % side;
      plan.group_of_cell[l] = (row % q) * q + (col % q);
    }
  } else {
    throw ConfigError("pilot reuse factor f = " + std::to_string(f) +
                      " has no regular grouping on a " + std::to_string(side) +
                      "x" + std::to_string(side) + " grid");
  }

  plan.copilot_cells.resize(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    for (int m = 0; m < L; ++m) {
      if (plan.group_of_cell[l] == plan.group_of_cell[m]) {
        plan.copilot_cells[l].push_back(m);
      }
    }
  }
  plan.pilot_index.resize(static_cast<std::size_t>(L) * config.K);
  for (int l = 0; l < L; ++l) {
    for (int k = 0; k < config.K; ++k) {
      plan.pilot_index[static_cast<std::size_t>(l) * config.K + k] =
          plan.group_of_cell[l] * config.K + k;
    }
  }
  return plan;
}

double cell_edge_distance(const ScenarioConfig& config) {
  return config.cell_side() / std::numbers::sqrt2;
}

double calibrate_rho_dl(const ScenarioConfig& config, double target_edge_snr_db) {
  const double beta_edge_db = large_scale_fading_db(cell_edge_distance(config), 0.0);
  const double rho_db = target_edge_snr_db + linear_to_db(config.sigma2_dl) - beta_edge_db;
  return db_to_linear(rho_db);
}

}  // namespace dlgain
