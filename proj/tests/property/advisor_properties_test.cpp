// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "edgeroof/advisor.hpp"
#include "support/generators.hpp"

namespace edgeroof {
namespace {

using testing_support::Rng;

ModeCatalog random_catalog(Rng& rng) {
  ModeCatalog catalog;
  const int n = static_cast<int>(rng.int_in(1, 8));
  for (int i = 0; i < n; ++i) {
    auto d = testing_support::device_with(rng.real_in(2.0, 20.0), rng.real_in(50.0, 250.0), 100 * (i + 1),
                                          rng.coin() ? 3200 : 2100, rng.real_in(50.0, 250.0), rng.real_in(0.0, 30.0));
    d.eps_flop = rng.real_in(1.0, 10.0) * 1e-12;
    catalog[d.mode] = d;
  }
  return catalog;
}

CostBreakdown random_cost(Rng& rng) {
  CostBreakdown c;
  c.flop_main = rng.int_in(1'000'000, 1'000'000'000'000);
  c.bytes_input = rng.int_in(1'000'000, 10'000'000'000);
  return c;
}

LayerProfile random_profile(Rng& rng, std::size_t n) {
  LayerProfile p;
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    LayerProfileEntry e;
    e.layer_id = "l" + std::to_string(i);
    e.ai = rng.log_uniform(0.1, 1000.0);
    e.runtime_fraction = rng.real_in(0.01, 1.0);
    total += e.runtime_fraction;
    p.push_back(e);
  }
  for (auto& e : p) e.runtime_fraction /= total;
  return p;
}

TEST(AdvisorProperties, SweepRowsMatchDirectPredictions) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    auto catalog = random_catalog(rng);
    auto cost = random_cost(rng);
    auto sweep = sweep_modes(catalog, cost);
    ASSERT_EQ(sweep.rows.size(), catalog.size());
    auto it = catalog.begin();
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto& row : sweep.rows) {
      const auto& d = (it++)->second;
      EXPECT_EQ(row.mode, d.mode);
      auto e = predict_energy(d, cost);
      EXPECT_DOUBLE_EQ(row.prediction.joules, e.joules);
      EXPECT_DOUBLE_EQ(row.prediction.runtime.seconds, e.runtime.seconds);
      EXPECT_DOUBLE_EQ(row.balance.beta_tau, balance_points(d).beta_tau);
      EXPECT_EQ(row.classes.time_class, classify_workload(d, row.ai).time_class);
      lo = std::min(lo, row.balance.beta_tau);
      hi = std::max(hi, row.balance.beta_tau);
    }
    EXPECT_DOUBLE_EQ(sweep.beta_tau_min, lo);
    EXPECT_DOUBLE_EQ(sweep.beta_tau_max, hi);
  }
}

TEST(AdvisorProperties, RecommendationIsFeasibleArgmin) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    auto catalog = random_catalog(rng);
    auto cost = random_cost(rng);
    auto sweep = sweep_modes(catalog, cost);
    double fastest = std::numeric_limits<double>::infinity();
    for (const auto& r : sweep.rows) fastest = std::min(fastest, r.prediction.runtime.seconds);
    const double budget = fastest * rng.real_in(1.0, 3.0);
    auto rec = recommend_mode(catalog, cost, budget, Objective::MinEnergy);
    EXPECT_LE(rec.row.prediction.runtime.seconds, budget);
    std::size_t feasible = 0;
    for (const auto& r : sweep.rows) {
      if (r.prediction.runtime.seconds > budget) continue;
      ++feasible;
      EXPECT_LE(rec.row.prediction.joules, r.prediction.joules);
    }
    EXPECT_EQ(rec.feasible_modes, feasible);
  }
}

TEST(AdvisorProperties, MinTimeIgnoresEnergyCoefficients) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    auto catalog = random_catalog(rng);
    auto cost = random_cost(rng);
    auto base = recommend_mode(catalog, cost, std::nullopt, Objective::MinTime);
    for (auto& [mode, d] : catalog) {
      d.eps_flop *= rng.real_in(0.1, 10.0);
      d.eps_mop *= rng.real_in(0.1, 10.0);
      d.static_power *= rng.real_in(0.0, 10.0);
    }
    EXPECT_EQ(recommend_mode(catalog, cost, std::nullopt, Objective::MinTime).row.mode, base.row.mode);
  }
}

TEST(AdvisorProperties, NoDropMeansNoDegradation) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    auto base = testing_support::random_device(rng);
    auto target = base;
    target.mode.gpu_mhz += 1;
    target.peak_flops *= rng.real_in(1.0, 2.0);
    target.peak_bw *= rng.real_in(1.0, 2.0);
    auto est = predict_layerwise_degradation(random_profile(rng, 10), base, target);
    EXPECT_EQ(est.total, 0.0);
    EXPECT_EQ(est.compute_peak_drop, 0.0);
    EXPECT_EQ(est.memory_peak_drop, 0.0);
  }
}

TEST(AdvisorProperties, DegradationDecomposesAndTracksComputeShare) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    auto base = testing_support::random_device(rng);
    auto target = base;
    target.peak_flops *= rng.real_in(0.3, 0.99);  // only the compute roof drops
    auto profile = random_profile(rng, 12);
    auto est = predict_layerwise_degradation(profile, base, target);
    EXPECT_NEAR(est.compute_bound_share + est.memory_bound_share, 1.0, 1e-9);
    EXPECT_NEAR(est.total, est.compute_term + est.memory_term, 1e-12);
    EXPECT_EQ(est.memory_term, 0.0);
    EXPECT_NEAR(est.compute_term, est.compute_peak_drop * est.compute_bound_share, 1e-12);

    // Moving one memory-bound layer above the ridge can only raise the estimate.
    const double beta = time_balance_point(base);
    auto shifted = profile;
    for (auto& e : shifted) {
      if (e.ai < beta) {
        e.ai = beta * 2;
        break;
      }
    }
    EXPECT_GE(predict_layerwise_degradation(shifted, base, target).total, est.total);
  }
}

}  // namespace
}  // namespace edgeroof
