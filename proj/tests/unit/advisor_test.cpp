// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/advisor.hpp"

#include <gtest/gtest.h>

#include <filesystem>

#include "edgeroof/model_io.hpp"
#include "edgeroof/shape_inference.hpp"
#include "support/expect_error.hpp"
#include "support/generators.hpp"

namespace edgeroof {
namespace {

using testing_support::data_path;
using testing_support::device_with;
using testing_support::maxn_fp32;

CostBreakdown wq(std::int64_t w, std::int64_t q) {
  CostBreakdown c;
  c.flop_main = w;
  c.bytes_input = q;
  return c;
}

ModeCatalog catalog_of(std::initializer_list<DeviceRoofline> devices) {
  ModeCatalog c;
  for (const auto& d : devices) c.emplace(d.mode, d);
  return c;
}

TEST(Catalog, GpuFrequencyFixture) {
  auto cat = load_catalog(data_path("data/catalogs/gpu_freq"));
  ASSERT_EQ(cat.size(), 3u);
  auto sweep = sweep_modes(cat, wq(8'230'000'000, 425'800'000));
  std::map<std::int64_t, double> beta;
  for (const auto& r : sweep.rows) beta[r.mode.gpu_mhz] = r.balance.beta_tau;
  EXPECT_NEAR(beta[1300], 89.4, 89.4 * 0.01);
  EXPECT_NEAR(beta[1100], 85.9, 85.9 * 0.01);
  EXPECT_NEAR(beta[700], 67.0, 67.0 * 0.01);
  EXPECT_DOUBLE_EQ(sweep.beta_tau_min, beta[700]);
  EXPECT_DOUBLE_EQ(sweep.beta_tau_max, beta[1300]);
}

TEST(Catalog, MemoryFrequencyFixture) {
  auto cat = load_catalog(data_path("data/catalogs/mem_freq"));
  auto sweep = sweep_modes(cat, wq(1, 1));
  ASSERT_EQ(sweep.rows.size(), 2u);
  EXPECT_EQ(sweep.rows[0].mode.mem_mhz, 2100);  // ascending key order
  EXPECT_NEAR(sweep.rows[0].balance.beta_tau, 109.9, 109.9 * 0.01);
  EXPECT_NEAR(sweep.rows[1].balance.beta_tau, 89.4, 89.4 * 0.01);
}

TEST(Catalog, SingleModeAndEmpty) {
  auto sweep = sweep_modes(catalog_of({maxn_fp32()}), wq(10, 10));
  ASSERT_EQ(sweep.rows.size(), 1u);
  EXPECT_EQ(sweep.beta_tau_min, sweep.beta_tau_max);
  EXPECT_ERROR_CODE(sweep_modes({}, wq(10, 10)), ErrorCode::EmptyCatalog);
}

TEST(Catalog, Validation) {
  auto fp16 = maxn_fp32();
  fp16.precision = kFP16;
  fp16.mode.gpu_mhz = 700;
  EXPECT_ERROR_CODE(validate_catalog(catalog_of({maxn_fp32(), fp16})), ErrorCode::InvalidDevice);
  ModeCatalog wrong_key;
  wrong_key.emplace(PowerMode{1, 1, 1, 1}, maxn_fp32());
  EXPECT_ERROR_CODE(validate_catalog(wrong_key), ErrorCode::InvalidDevice);
  EXPECT_ERROR_CODE(load_catalog("/nonexistent/catalog"), ErrorCode::IoError);
}

TEST(Catalog, CalibratesMeasurementCsvs) {
  auto cat = load_catalog(data_path("data/measurements"));
  ASSERT_EQ(cat.size(), 2u);
  for (const auto& [mode, d] : cat) {
    EXPECT_EQ(d.provenance, Provenance::Fitted);
    EXPECT_EQ(d.mode, mode);
  }
  EXPECT_NEAR(cat.at(PowerMode{12, 2201, 1300, 2100}).peak_bw / 103.9e9, 1.0, 0.03);
}

TEST(Degradation, ProductRule) {
  auto base = maxn_fp32();
  const double beta = time_balance_point(base);
  auto slower = base;
  slower.peak_flops *= 0.8;
  slower.mode.gpu_mhz = 1000;

  LayerProfile memory_only = {{"a", beta / 4, 0.6}, {"b", beta / 2, 0.4}};
  EXPECT_DOUBLE_EQ(predict_layerwise_degradation(memory_only, base, slower).total, 0.0);

  LayerProfile half = {{"a", beta * 2, 0.5}, {"b", beta / 2, 0.5}};
  EXPECT_NEAR(predict_layerwise_degradation(half, base, slower).total, 0.10, 1e-12);

  auto drop = base;
  drop.peak_flops *= 1 - 0.307;
  LayerProfile all = {{"a", beta * 3, 0.7}, {"b", beta * 5, 0.3}};
  EXPECT_NEAR(predict_layerwise_degradation(all, base, drop).total, 0.307, 1e-12);
}

TEST(Degradation, MemoryShiftAndValidation) {
  auto base = maxn_fp32();
  auto target = device_with(11.4, 103.9, 1300, 2100);
  LayerProfile p = {{"a", 10, 1.0}};
  auto est = predict_layerwise_degradation(p, base, target);
  EXPECT_NEAR(est.memory_term, 1.0 - 103.9 / 164.4, 1e-12);
  EXPECT_DOUBLE_EQ(est.compute_term, 0.0);

  EXPECT_ERROR_CODE(predict_layerwise_degradation({{"a", 10, 0.5}}, base, target), ErrorCode::ProfileInvalid);
  EXPECT_ERROR_CODE(predict_layerwise_degradation({{"a", -1, 1.0}}, base, target), ErrorCode::ProfileInvalid);
  EXPECT_ERROR_CODE(predict_layerwise_degradation({}, base, target), ErrorCode::ProfileInvalid);
  auto fp16 = target;
  fp16.precision = kFP16;
  EXPECT_ERROR_CODE(predict_layerwise_degradation(p, base, fp16), ErrorCode::InvalidArgument);
}

TEST(Profile, CsvAndFromWorkload) {
  auto p = parse_layer_profile("layer_id,ai,runtime_fraction\nconv1,61.5,0.25\nfc,0.5,0.75\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1].layer_id, "fc");
  EXPECT_ERROR_CODE(parse_layer_profile("id,ai\n"), ErrorCode::ProfileInvalid);
  EXPECT_ERROR_CODE(parse_layer_profile("layer_id,ai,runtime_fraction\nx,1,0.3\n"), ErrorCode::ProfileInvalid);

  auto g = load_model_file(data_path("data/models/tiny_cnn.json"));
  auto w = aggregate_workload(infer_shapes(g, 1), CostMode::Inference, kFP32);
  auto prof = profile_from_workload(w, maxn_fp32());
  double sum = 0;
  for (const auto& e : prof) sum += e.runtime_fraction;
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Recommend, SameTimeLowerEnergyWins) {
  auto fast = maxn_fp32();
  auto slow_gpu = device_with(9.5, 164.4, 700, 3200, 120.0, 12.0);
  auto cat = catalog_of({fast, slow_gpu});
  auto memory_bound = wq(1'000'000'000, 1'000'000'000);
  auto rec = recommend_mode(cat, memory_bound, std::nullopt, Objective::MinEnergy);
  EXPECT_EQ(rec.row.mode.gpu_mhz, 700);
  EXPECT_EQ(rec.feasible_modes, 2u);
}

TEST(Recommend, MinTimePicksHighestAttainable) {
  auto cat = load_catalog(data_path("data/catalogs/gpu_freq"));
  auto compute_bound = wq(1'000'000'000'000, 1'000'000'000);
  auto rec = recommend_mode(cat, compute_bound, std::nullopt, Objective::MinTime);
  EXPECT_EQ(rec.row.mode.gpu_mhz, 1300);
}

TEST(Recommend, BudgetFiltersAndInfeasible) {
  auto cat = load_catalog(data_path("data/catalogs/gpu_freq"));
  auto c = wq(1'000'000'000'000, 1'000'000'000);  // ~68 ms at MAXN, ~105 ms at 0.7 GHz
  auto rec = recommend_mode(cat, c, 0.075, Objective::MinEnergy);
  EXPECT_LE(rec.row.prediction.runtime.seconds, 0.075);
  EXPECT_LT(rec.feasible_modes, cat.size());
  try {
    recommend_mode(cat, c, 0.001, Objective::MinEnergy);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleBudget);
    EXPECT_NE(e.detail().find("c12_cpu2201_gpu1300_mem3200"), std::string::npos);
  }
}

TEST(Recommend, TiesGoToLowestKey) {
  auto a = maxn_fp32();
  auto b = maxn_fp32();
  b.mode.cpu_cores = 4;  // CPU settings do not move the roofline
  auto rec = recommend_mode(catalog_of({a, b}), wq(100, 100), std::nullopt, Objective::MinEnergy);
  EXPECT_EQ(rec.row.mode.cpu_cores, 4);
}

}  // namespace
}  // namespace edgeroof
