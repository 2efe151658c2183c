// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/report.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "edgeroof/model_io.hpp"
#include "edgeroof/shape_inference.hpp"
#include "support/expect_error.hpp"
#include "support/generators.hpp"

namespace edgeroof {
namespace {

using nlohmann::json;
using testing_support::data_path;
using testing_support::maxn_fp32;

WorkloadCost resnet_bs1() {
  auto g = load_model_file(data_path("tests/fixtures/resnet50.onnx"));
  return aggregate_workload(infer_shapes(g, 1), CostMode::Inference, kFP32);
}

TEST(ReportFormat, Parse) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::Csv);
  EXPECT_EQ(parse_report_format("md"), ReportFormat::Markdown);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
  EXPECT_ERROR_CODE(parse_report_format("html"), ErrorCode::InvalidArgument);
}

TEST(Report, ResNetMarkdownOnMaxn) {
  auto md = emit_report(resnet_bs1(), "resnet50", maxn_fp32(), ReportFormat::Markdown);
  EXPECT_NE(md.find("arithmetic intensity: 19.32"), std::string::npos) << md.substr(0, 600);
  EXPECT_NE(md.find("MemoryBound/MemoryBound"), std::string::npos);
  EXPECT_NE(md.find("lower-bound energy"), std::string::npos);
}

TEST(Report, JsonParsesAndRoundTrips) {
  auto text = emit_report(resnet_bs1(), "resnet50", maxn_fp32(), ReportFormat::Json);
  auto j = json::parse(text);
  EXPECT_EQ(j["schema"], "edgeroof.report");
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["totals"]["flop"], 8228746216);
  EXPECT_NEAR(j["totals"]["ai"].get<double>(), 19.33, 0.05);
  EXPECT_EQ(j["devices"][0]["classification"]["time"], "MemoryBound");
  EXPECT_EQ(j["layers"].size(), 175u);
  // Key order is part of the format.
  EXPECT_EQ(nlohmann::ordered_json::parse(text).dump(2) + "\n", text);
}

TEST(Report, CatalogBlocksSortedByKey) {
  auto cat = load_catalog(data_path("data/catalogs/gpu_freq"));
  auto j = json::parse(emit_report(resnet_bs1(), "resnet50", cat, ReportFormat::Json));
  ASSERT_EQ(j["devices"].size(), 3u);
  std::vector<std::string> keys;
  for (const auto& d : j["devices"]) keys.push_back(d["mode"]);
  EXPECT_EQ(keys, (std::vector<std::string>{"c12_cpu2201_gpu700_mem3200", "c12_cpu2201_gpu1100_mem3200",
                                            "c12_cpu2201_gpu1300_mem3200"}));
  auto md = emit_report(resnet_bs1(), "resnet50", cat, ReportFormat::Markdown);
  EXPECT_LT(md.find("gpu700"), md.find("gpu1100"));
  EXPECT_LT(md.find("gpu1100"), md.find("gpu1300"));
}

TEST(Report, CsvHasTotalRow) {
  auto csv = emit_report(resnet_bs1(), "resnet50", maxn_fp32(), ReportFormat::Csv);
  EXPECT_NE(csv.find("\nTOTAL,"), std::string::npos);
}

TEST(Report, TrainingFlagsExtrapolation) {
  auto g = load_model_file(data_path("data/models/bert_large.json"));
  auto w = aggregate_workload(infer_shapes(g, 1), CostMode::Training, kFP32);
  auto j = json::parse(emit_report(w, "bert", maxn_fp32(), ReportFormat::Json));
  EXPECT_TRUE(j["backward_extrapolated"].get<bool>());
  auto md = emit_report(w, "bert", maxn_fp32(), ReportFormat::Markdown);
  EXPECT_NE(md.find("extrapolat"), std::string::npos);
}

TEST(Diagnostics, JsonFields) {
  std::vector<DeviceRoofline> ds = {maxn_fp32()};
  auto j = json::parse(emit_diagnostics(ds, ReportFormat::Json));
  EXPECT_EQ(j["schema"], "edgeroof.roofline");
  const auto& d = j["devices"][0];
  EXPECT_NEAR(d["balance"]["beta_tau"].get<double>(), 89.4161, 1e-4);
  EXPECT_TRUE(d["race_to_halt"].get<bool>());
}

TEST(Sweep, EmitsAllFormats) {
  auto cat = load_catalog(data_path("data/catalogs/mem_freq"));
  auto s = sweep_modes(cat, resnet_bs1().total);
  auto j = json::parse(emit_sweep(s, "resnet50", ReportFormat::Json));
  EXPECT_EQ(j["modes"].size(), 2u);
  EXPECT_NEAR(j["beta_tau_max"].get<double>(), 109.7, 0.1);
  EXPECT_NE(emit_sweep(s, "resnet50", ReportFormat::Csv).find("mode,time_s"), std::string::npos);
  EXPECT_NE(emit_sweep(s, "resnet50", ReportFormat::Markdown).find("| mode |"), std::string::npos);
}

TEST(Recommendation, CarriesCaveat) {
  auto cat = load_catalog(data_path("data/catalogs/gpu_freq"));
  auto w = resnet_bs1();
  auto rec = recommend_mode(cat, w.total, std::nullopt, Objective::MinEnergy);
  PowerMode base{12, 2201, 1300, 3200};
  auto est = predict_layerwise_degradation(profile_from_workload(w, cat.at(base)), cat.at(base), cat.at(rec.row.mode));
  auto md = emit_recommendation(rec, Objective::MinEnergy, "resnet50", est, &base, ReportFormat::Markdown);
  EXPECT_NE(md.find("coarse estimate"), std::string::npos);
  auto j = json::parse(emit_recommendation(rec, Objective::MinEnergy, "resnet50", est, &base, ReportFormat::Json));
  EXPECT_EQ(j["schema"], "edgeroof.recommendation");
  EXPECT_EQ(j["degradation_estimate"]["base_mode"], base.key());
  auto plain = json::parse(emit_recommendation(rec, Objective::MinTime, "r", std::nullopt, nullptr, ReportFormat::Json));
  EXPECT_FALSE(plain.contains("degradation_estimate"));
}

TEST(BatchSweepReport, Json) {
  auto g = load_model_file(data_path("data/models/tiny_cnn.json"));
  auto s = batch_ai_sweep(g, {1, 4, 16}, CostMode::Inference, kFP32);
  auto j = json::parse(emit_batch_sweep(s, "tiny", ReportFormat::Json));
  EXPECT_EQ(j["points"].size(), 3u);
  EXPECT_EQ(j["points"][2]["batch"], 16);
}

TEST(FitReport, Json) {
  auto samples = testing_support::synthesize_samples({}, 3, 0.0, 1);
  auto fit = fit_energy_coefficients(samples, measure_static_power(samples));
  auto d = build_device_roofline(fit_peaks(samples), measure_static_power(samples), fit, PowerMode{12, 2201, 1300, 3200},
                                 kFP32);
  auto j = json::parse(emit_fit(d, fit, ReportFormat::Json));
  EXPECT_EQ(j["schema"], "edgeroof.fit");
  EXPECT_NEAR(j["eps_flop_pj"].get<double>(), 3.86, 1e-3);
}

}  // namespace
}  // namespace edgeroof
