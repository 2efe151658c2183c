// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <string>

#include "edgeroof/calibration.hpp"
#include "edgeroof/cost_model.hpp"
#include "edgeroof/model_io.hpp"
#include "edgeroof/shape_inference.hpp"
#include "edgeroof/svg_plot.hpp"

namespace {

using namespace edgeroof;

std::string source_path(const std::string& relative) { return std::string(EDGEROOF_SOURCE_DIR) + "/" + relative; }

const std::string& resnet_bytes() {
  static const std::string bytes = read_text_file(source_path("tests/fixtures/resnet50.onnx"));
  return bytes;
}

void BM_OnnxImportResNet50(benchmark::State& state) {
  const auto& bytes = resnet_bytes();
  const std::span<const std::uint8_t> view(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
  for (auto _ : state) benchmark::DoNotOptimize(import_onnx(view));
}
BENCHMARK(BM_OnnxImportResNet50);

void BM_CostAggregationResNet50(benchmark::State& state) {
  const auto& bytes = resnet_bytes();
  const auto graph = import_onnx(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
  const auto mode = state.range(0) == 0 ? CostMode::Inference : CostMode::Training;
  for (auto _ : state) {
    auto shaped = infer_shapes(graph, 64);
    benchmark::DoNotOptimize(aggregate_workload(shaped, mode, kFP32));
  }
}
BENCHMARK(BM_CostAggregationResNet50)->Arg(0)->Arg(1);

void BM_RenderRooflineSvg(benchmark::State& state) {
  PlotSpec spec;
  spec.rooflines.push_back(load_device_config(source_path("data/devices/maxn_fp32.json")));
  spec.rooflines.push_back(load_device_config(source_path("data/devices/maxn_fp16.json")));
  spec.variant = state.range(0) == 0 ? PlotVariant::Time : PlotVariant::Energy;
  for (int i = 0; i < 16; ++i) {
    WorkloadPoint p;
    p.label = "w" + std::to_string(i);
    p.ai = 0.5 * (i + 1);
    p.achieved_perf = 1e11 * (i + 1);
    p.achieved_eff = 1e9 * (i + 1);
    spec.points.push_back(p);
  }
  for (auto _ : state) benchmark::DoNotOptimize(render_roofline_svg(spec));
}
BENCHMARK(BM_RenderRooflineSvg)->Arg(0)->Arg(1);

void BM_CalibrateMode(benchmark::State& state) {
  const auto samples = load_measurements(source_path("data/measurements/c12_cpu2201_gpu1300_mem3200.csv"));
  for (auto _ : state) benchmark::DoNotOptimize(calibrate(samples, PowerMode{12, 2201, 1300, 3200}, kFP32));
}
BENCHMARK(BM_CalibrateMode);

}  // namespace

BENCHMARK_MAIN();
