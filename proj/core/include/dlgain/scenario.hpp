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
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlgain/rng.hpp"
#include "dlgain/types.hpp"

namespace dlgain {

// Static description of the multi-cell network. Powers are in mW, lengths in
// meters, angles in degrees. Defaults reproduce the 4-cell, 64-antenna setup.
struct ScenarioConfig {
  int L = 4;
  int K = 3;
  int M = 64;
  double area_side = 500.0;
  int tau_c = 500;
  int f = 1;
  // Max DL power. When absent it is calibrated so that a cell-edge user sees
  // a 10 dB median DL SNR (see calibrate_rho_dl).
  std::optional<double> rho_dl;
  double p_hat = 100.0;
  double sigma2_ul = 3.981071705534973e-10;  // -94 dBm
  double sigma2_dl = 3.981071705534973e-10;  // -94 dBm
  double min_dist = 35.0;
  double shadow_std_db = 7.0;
  double asd_deg = 7.0;
  // Per (cell, user) DL power fractions, row-major L x K. Empty means 1/K.
  std::vector<double> eta;
  std::uint64_t seed = 1;

  int tau_p() const { return f * K; }
  int users() const { return L * K; }
  int data_symbols() const { return tau_c - tau_p(); }
  int grid_side() const;
  double cell_side() const { return area_side / grid_side(); }
  double eta_of(int cell, int k) const;
  double asd_rad() const;

  // Throws ConfigError on any violated invariant.
  void validate() const;

  // Fills rho_dl from the edge-SNR calibration when it is unset.
  ScenarioConfig resolved() const;
  double rho_dl_value() const;

  nlohmann::json to_json() const;
  static ScenarioConfig from_json(const nlohmann::json& doc);
  static ScenarioConfig load(const std::filesystem::path& path);
};

inline constexpr double kDefaultEdgeSnrDb = 10.0;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// BS positions at the centers of a sqrt(L) x sqrt(L) grid of square cells.
// Cell index l = row * sqrt(L) + col with row along y.
std::vector<Point> build_grid(const ScenarioConfig& config);

// Displacement from a to the nearest toroidal translate of b.
Point wrap_displacement(Point a, Point b, double area_side);
double wrap_distance(Point a, Point b, double area_side);

// beta[dB] = -35 - 36.7 log10(d / 1 m) + shadow_db, returned in linear scale.
double large_scale_fading(double distance_m, double shadow_db);
double large_scale_fading_db(double distance_m, double shadow_db);

// One realization of user positions and large-scale quantities. Per-pair
// arrays are indexed [bs * users + user] with user = cell * K + k.
struct UserDrop {
  int L = 0;
  int K = 0;
  std::vector<Point> positions;
  std::vector<double> distance;
  std::vector<double> shadow_db;
  std::vector<double> beta;
  std::vector<double> aoa_rad;

  int users() const { return L * K; }
  std::size_t pair(int bs, int user) const {
    return static_cast<std::size_t>(bs) * users() + user;
  }
  double beta_of(int bs, int user) const { return beta[pair(bs, user)]; }

  void write_csv(const std::filesystem::path& path) const;
};

inline constexpr int kDropRetryCap = 100000;

UserDrop drop_users(const ScenarioConfig& config,
                    const std::vector<Point>& centers, Rng& rng);

struct PilotPlan {
  int L = 0;
  int K = 0;
  int f = 1;
  std::vector<int> group_of_cell;
  // Cells sharing the pilot subset of cell l, including l itself.
  std::vector<std::vector<int>> copilot_cells;
  // Pilot index per user, in [0, f*K).
  std::vector<int> pilot_index;

  int tau_p() const { return f * K; }
  bool shares_pilots(int a, int b) const {
    return group_of_cell[a] == group_of_cell[b];
  }
};

// Partitions the cells into f reuse groups. f = q^2 tiles the grid with
// q x q blocks; f = 2 uses a checkerboard so diagonal cells share pilots.
PilotPlan assign_pilots(const ScenarioConfig& config);

// Corner-of-cell distance (half the cell diagonal).
double cell_edge_distance(const ScenarioConfig& config);

// rho_dl in mW such that rho_dl * beta_edge / sigma2_dl equals the target,
// with beta_edge at the cell corner and median (0 dB) shadowing.
double calibrate_rho_dl(const ScenarioConfig& config, double target_edge_snr_db);

}  // namespace dlgain
