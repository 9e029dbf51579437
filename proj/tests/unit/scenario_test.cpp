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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "dlgain/scenario.hpp"

namespace dlgain {
namespace {

TEST(Grid, FourCellCenters) {
  ScenarioConfig c;
  const auto centers = build_grid(c);
  ASSERT_EQ(centers.size(), 4u);
  const double expect[4][2] = {{125, 125}, {375, 125}, {125, 375}, {375, 375}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(centers[i].x, expect[i][0]);
    EXPECT_DOUBLE_EQ(centers[i].y, expect[i][1]);
  }
  EXPECT_DOUBLE_EQ(c.cell_side(), 250.0);
}

TEST(Grid, SingleCell) {
  ScenarioConfig c;
  c.L = 1;
  c.eta.clear();
  const auto centers = build_grid(c);
  ASSERT_EQ(centers.size(), 1u);
  EXPECT_DOUBLE_EQ(centers[0].x, 250.0);
  EXPECT_DOUBLE_EQ(centers[0].y, 250.0);
}

TEST(Grid, NonSquareRejected) {
  ScenarioConfig c;
  c.L = 3;
  EXPECT_THROW(build_grid(c), ConfigError);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Wrap, Distances) {
  EXPECT_NEAR(wrap_distance({0, 0}, {490, 0}, 500), 10.0, 1e-12);
  EXPECT_NEAR(wrap_distance({0, 0}, {250, 0}, 500), 250.0, 1e-12);
  EXPECT_NEAR(wrap_distance({10, 10}, {490, 490}, 500), std::sqrt(800.0), 1e-12);
  EXPECT_NEAR(std::sqrt(800.0), 28.284, 1e-3);
}

TEST(Wrap, Symmetric) {
  const Point a{17, 480}, b{333, 2};
  EXPECT_DOUBLE_EQ(wrap_distance(a, b, 500), wrap_distance(b, a, 500));
}

TEST(Pathloss, Examples) {
  EXPECT_NEAR(large_scale_fading_db(1.0, 0.0), -35.0, 1e-12);
  EXPECT_NEAR(large_scale_fading_db(100.0, 0.0), -108.4, 1e-12);
  EXPECT_NEAR(large_scale_fading_db(100.0, 7.0), -101.4, 1e-12);
  EXPECT_NEAR(large_scale_fading(100.0, 0.0), std::pow(10.0, -10.84), 1e-20);
  EXPECT_THROW(large_scale_fading(0.5, 0.0), DomainError);
}

TEST(Pathloss, MonotoneInDistance) {
  double prev = large_scale_fading(1.0, 0.0);
  for (double d = 2.0; d < 1000.0; d *= 1.3) {
    const double b = large_scale_fading(d, 0.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Drop, UsersInsideOwnCellAndAboveMinimumDistance) {
  ScenarioConfig c;
  c.K = 50;
  c.eta.clear();
  auto rng = rng_stream(7, stage::kDrop);
  const auto centers = build_grid(c);
  const auto drop = drop_users(c, centers, rng);
  const double half = c.cell_side() / 2;
  for (int l = 0; l < c.L; ++l) {
    for (int k = 0; k < c.K; ++k) {
      const int u = l * c.K + k;
      const Point p = drop.positions[u];
      EXPECT_LE(std::abs(p.x - centers[l].x), half);
      EXPECT_LE(std::abs(p.y - centers[l].y), half);
      EXPECT_GE(drop.distance[drop.pair(l, u)], c.min_dist);
    }
  }
}

TEST(Drop, BetaComposesPathlossAndShadowing) {
  ScenarioConfig c;
  auto rng = rng_stream(3, stage::kDrop);
  const auto drop = drop_users(c, build_grid(c), rng);
  for (std::size_t i = 0; i < drop.beta.size(); ++i) {
    EXPECT_NEAR(drop.beta[i], large_scale_fading(drop.distance[i], drop.shadow_db[i]),
                1e-12 * drop.beta[i]);
  }
}

TEST(Drop, ShadowingMoments) {
  ScenarioConfig c;
  c.K = 6250;  // 4 * 4 * 6250 = 1e5 (BS, user) pairs
  c.eta.clear();
  auto rng = rng_stream(11, stage::kDrop);
  const auto drop = drop_users(c, build_grid(c), rng);
  const auto& s = drop.shadow_db;
  const double n = static_cast<double>(s.size());
  const double m = std::accumulate(s.begin(), s.end(), 0.0) / n;
  double v = 0.0;
  for (double x : s) v += (x - m) * (x - m);
  v /= n - 1;
  EXPECT_NEAR(m, 0.0, 0.1);
  EXPECT_NEAR(std::sqrt(v), 7.0, 0.1);
}

TEST(Drop, Deterministic) {
  ScenarioConfig c;
  auto r1 = rng_stream(5, stage::kDrop, 2);
  auto r2 = rng_stream(5, stage::kDrop, 2);
  const auto a = drop_users(c, build_grid(c), r1);
  const auto b = drop_users(c, build_grid(c), r2);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.aoa_rad, b.aoa_rad);
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    EXPECT_EQ(a.positions[i].x, b.positions[i].x);
    EXPECT_EQ(a.positions[i].y, b.positions[i].y);
  }
}

TEST(Drop, DegenerateGeometryHitsRetryCap) {
  ScenarioConfig c;
  c.min_dist = 200.0;  // larger than the cell half-diagonal
  auto rng = rng_stream(1, stage::kDrop);
  EXPECT_THROW(drop_users(c, build_grid(c), rng), NumericError);
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Pilots, UniversalReuse) {
  ScenarioConfig c;
  const auto plan = assign_pilots(c);
  EXPECT_EQ(plan.tau_p(), c.K);
  for (int l = 0; l < 4; ++l) EXPECT_EQ(plan.copilot_cells[l].size(), 4u);
}

TEST(Pilots, FullReuseFactor) {
  ScenarioConfig c;
  c.f = 4;
  const auto plan = assign_pilots(c);
  EXPECT_EQ(plan.tau_p(), 4 * c.K);
  for (int l = 0; l < 4; ++l) {
    ASSERT_EQ(plan.copilot_cells[l].size(), 1u);
    EXPECT_EQ(plan.copilot_cells[l][0], l);
  }
  // Pilots are unique network-wide.
  std::vector<int> seen(plan.pilot_index);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());
}

TEST(Pilots, CheckerboardForFactorTwo) {
  ScenarioConfig c;
  c.f = 2;
  const auto plan = assign_pilots(c);
  // Cells 0 and 3 are diagonal, as are 1 and 2.
  EXPECT_TRUE(plan.shares_pilots(0, 3));
  EXPECT_TRUE(plan.shares_pilots(1, 2));
  EXPECT_FALSE(plan.shares_pilots(0, 1));
  EXPECT_FALSE(plan.shares_pilots(0, 2));
  EXPECT_EQ(plan.copilot_cells[0].size(), 2u);
}

TEST(Pilots, InfeasibleFactor) {
  ScenarioConfig c;
  c.f = 3;
  EXPECT_THROW(assign_pilots(c), ConfigError);
}

TEST(Pilots, CopilotRelationSymmetricAndSlotsMatch) {
  for (int f : {1, 2, 4}) {
    ScenarioConfig c;
    c.f = f;
    const auto plan = assign_pilots(c);
    for (int a = 0; a < c.L; ++a) {
      for (int b = 0; b < c.L; ++b) {
        EXPECT_EQ(plan.shares_pilots(a, b), plan.shares_pilots(b, a));
        if (plan.shares_pilots(a, b)) {
          for (int k = 0; k < c.K; ++k) {
            EXPECT_EQ(plan.pilot_index[a * c.K + k], plan.pilot_index[b * c.K + k]);
          }
        }
      }
    }
  }
}

TEST(Calibration, CornerDistanceAndPower) {
  ScenarioConfig c;
  EXPECT_NEAR(cell_edge_distance(c), 125.0 * std::sqrt(2.0), 1e-9);
  // Independent scalar computation: SNR + sigma2[dBm] - beta_edge[dB].
  const double beta_edge_db = -35.0 - 36.7 * std::log10(125.0 * std::sqrt(2.0));
  EXPECT_NEAR(beta_edge_db, -117.48, 0.01);
  const double expect_dbm = 10.0 + (-94.0) - beta_edge_db;
  const double rho = calibrate_rho_dl(c, 10.0);
  EXPECT_NEAR(linear_to_db(rho), expect_dbm, 1e-6);
  EXPECT_NEAR(linear_to_db(rho), 33.48, 0.01);
  EXPECT_NEAR(linear_to_db(calibrate_rho_dl(c, 0.0)), 23.48, 0.01);
}

TEST(Config, DefaultsResolveRho) {
  ScenarioConfig c;
  EXPECT_FALSE(c.rho_dl.has_value());
  const auto r = c.resolved();
  ASSERT_TRUE(r.rho_dl.has_value());
  EXPECT_DOUBLE_EQ(*r.rho_dl, calibrate_rho_dl(c, kDefaultEdgeSnrDb));
}

TEST(Config, JsonRoundTrip) {
  ScenarioConfig c;
  c.K = 10;
  c.M = 32;
  c.asd_deg = 30.0;
  c.seed = 99;
  c.rho_dl = 2000.0;
  const auto back = ScenarioConfig::from_json(c.to_json());
  EXPECT_EQ(back.K, 10);
  EXPECT_EQ(back.M, 32);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_DOUBLE_EQ(back.asd_deg, 30.0);
  EXPECT_DOUBLE_EQ(*back.rho_dl, 2000.0);
}

TEST(Config, RejectsUnknownKeyAndBadValues) {
  EXPECT_THROW(ScenarioConfig::from_json({{"antennas", 8}}), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json({{"K", 0}}), ConfigError);
  EXPECT_THROW(ScenarioConfig::from_json({{"tau_c", 2}}), ConfigError);
  ScenarioConfig c;
  c.eta = std::vector<double>(12, 0.5);  // per-cell sum exceeds 1
  EXPECT_THROW(c.validate(), ConfigError);
  c.eta = std::vector<double>(5, 0.1);
  EXPECT_THROW(c.validate(), ConfigError);
}

}  // namespace
}  // namespace dlgain
