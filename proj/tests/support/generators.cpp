// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace testing_support {

using namespace edgeroof;

double Rng::log_uniform(double lo, double hi) { return std::exp(real_in(std::log(lo), std::log(hi))); }

std::string data_path(const std::string& relative) { return std::string(EDGEROOF_SOURCE_DIR) + "/" + relative; }

oracle::ConvCase random_conv_case(Rng& rng, std::int64_t max_extent) {
  for (;;) {
    oracle::ConvCase c;
    c.n = rng.int_in(1, 3);
    c.groups = rng.coin(0.25) ? rng.int_in(1, 4) : 1;
    c.c_in = c.groups * rng.int_in(1, std::max<std::int64_t>(1, 8 / c.groups));
    c.c_out = c.groups * rng.int_in(1, std::max<std::int64_t>(1, 8 / c.groups));
    c.h = rng.int_in(1, max_extent);
    c.w = rng.int_in(1, max_extent);
    c.kernel = rng.int_in(1, 5);
    c.stride = rng.int_in(1, 3);
    c.pad = rng.int_in(0, 2);
    c.dilation = rng.coin(0.2) ? 2 : 1;
    c.act_cost = rng.coin() ? 1 : 0;
    const auto span = c.dilation * (c.kernel - 1) + 1;
    if (span <= c.h + 2 * c.pad && span <= c.w + 2 * c.pad) return c;
  }
}

oracle::ConvCase random_same_conv_case(Rng& rng, std::int64_t max_extent) {
  oracle::ConvCase c;
  c.n = rng.int_in(1, 4);
  c.c_in = rng.int_in(1, 32);
  c.c_out = rng.int_in(1, 32);
  c.kernel = 2 * rng.int_in(0, 3) + 1;
  c.pad = (c.kernel - 1) / 2;
  c.h = rng.int_in(1, max_extent);
  c.w = rng.int_in(1, max_extent);
  return c;
}

oracle::LinearCase random_linear_case(Rng& rng, std::int64_t max_extent) {
  oracle::LinearCase c;
  c.n = rng.int_in(1, 4);
  c.seq = rng.coin() ? rng.int_in(1, max_extent) : 0;
  c.d_in = rng.int_in(1, max_extent);
  c.d_out = rng.int_in(1, max_extent);
  c.act_cost = rng.coin() ? 1 : 0;
  return c;
}

ModelGraph conv_graph(const oracle::ConvCase& c, const std::string& activation) {
  LayerSpec l{"conv", LayerKind::Conv2d, {}, {}};
  l.params.set("out_channels", c.c_out);
  l.params.set("kernel", c.kernel);
  l.params.set("stride", c.stride);
  l.params.set("padding", c.pad);
  l.params.set("dilation", c.dilation);
  l.params.set("groups", c.groups);
  if (!activation.empty()) l.params.set("activation", activation);
  return ModelGraph::create("conv", kFP32, c.n, {l}, {{"conv", TensorShape({c.n, c.c_in, c.h, c.w})}});
}

ModelGraph linear_graph(const oracle::LinearCase& c, const std::string& activation) {
  LayerSpec l{"fc", LayerKind::Linear, {}, {}};
  l.params.set("out_features", c.d_out);
  if (!activation.empty()) l.params.set("activation", activation);
  TensorShape in = c.seq > 0 ? TensorShape({c.n, c.seq, c.d_in}) : TensorShape({c.n, c.d_in});
  return ModelGraph::create("fc", kFP32, c.n, {l}, {{"fc", in}});
}

ModelGraph random_dag(Rng& rng, int layers) {
  std::vector<LayerSpec> specs;
  const TensorShape shape({1, 4, 3, 3});
  std::map<std::string, TensorShape> inputs;
  for (int i = 0; i < layers; ++i) {
    LayerSpec l;
    l.id = "n" + std::to_string(i);
    if (i == 0 || rng.coin(0.1)) {
      l.kind = LayerKind::Activation;
      l.params.set("activation", "relu");
      inputs.emplace(l.id, shape);
    } else if (i >= 2 && rng.coin(0.4)) {
      l.kind = LayerKind::Elementwise;
      l.params.set("op", "add");
      const auto a = rng.int_in(0, i - 1);
      auto b = rng.int_in(0, i - 1);
      if (b == a) b = (a + 1) % i;
      l.inputs = {"n" + std::to_string(a), "n" + std::to_string(b)};
    } else {
      l.kind = LayerKind::Activation;
      l.params.set("activation", rng.coin() ? "relu" : "tanh");
      l.inputs = {"n" + std::to_string(rng.int_in(0, i - 1))};
    }
    specs.push_back(std::move(l));
  }
  std::shuffle(specs.begin(), specs.end(), rng.engine());
  return ModelGraph::create("dag", kFP32, 1, std::move(specs), std::move(inputs));
}

ModelGraph random_model(Rng& rng) {
  // Image branch: conv/bn/act/pool stack, then a dense head.
  std::vector<LayerSpec> specs;
  std::int64_t c = rng.int_in(1, 8), hw = rng.int_in(8, 16);
  const std::int64_t n = rng.int_in(1, 2);
  const std::int64_t in_hw = hw;
  auto add = [&](LayerKind kind, std::vector<std::string> in) -> LayerSpec& {
    LayerSpec l;
    l.id = "l" + std::to_string(specs.size());
    l.kind = kind;
    l.inputs = std::move(in);
    specs.push_back(std::move(l));
    return specs.back();
  };
  auto last = [&] { return specs.back().id; };

  auto& stem = add(LayerKind::Conv2d, {});
  c = rng.int_in(2, 12);
  stem.params.set("out_channels", c);
  stem.params.set("kernel", 3);
  stem.params.set("padding", 1);
  if (rng.coin()) stem.params.set("activation", "relu");
  const int blocks = static_cast<int>(rng.int_in(1, 4));
  for (int b = 0; b < blocks; ++b) {
    switch (rng.int_in(0, 4)) {
      case 0: {
        auto& bn = add(LayerKind::BatchNorm, {last()});
        (void)bn;
        break;
      }
      case 1: {
        auto& act = add(LayerKind::Activation, {last()});
        act.params.set("activation", rng.coin() ? "sigmoid" : "hardswish");
        break;
      }
      case 2: {
        const auto skip = last();
        auto& conv = add(LayerKind::Conv2d, {skip});
        conv.params.set("out_channels", c);
        conv.params.set("kernel", 3);
        conv.params.set("padding", 1);
        add(LayerKind::Elementwise, {last(), skip}).params.set("op", "add");
        break;
      }
      case 3: {
        if (hw >= 4) {
          auto& pool = add(LayerKind::Pool2d, {last()});
          pool.params.set("kernel", 2);
          pool.params.set("mode", "max");
          hw /= 2;
        }
        break;
      }
      default: {
        auto& conv = add(LayerKind::Conv2d, {last()});
        const auto g = c % 2 == 0 ? 2 : 1;
        conv.params.set("out_channels", c);
        conv.params.set("kernel", 1);
        conv.params.set("groups", g);
        break;
      }
    }
  }
  auto& gap = add(LayerKind::Pool2d, {last()});
  gap.params.set("global", 1);
  gap.params.set("mode", "avg");
  add(LayerKind::Reshape, {last()});
  auto& fc = add(LayerKind::Linear, {last()});
  fc.params.set("out_features", rng.int_in(2, 10));
  if (rng.coin()) add(LayerKind::Softmax, {last()}).params.set("axis", 1);
  return ModelGraph::create("random", kFP32, n, std::move(specs), {{"l0", TensorShape({n, rng.int_in(1, 4), in_hw, in_hw})}});
}

ModelGraph weight_fraction_model(double weight_fraction) {
  // With d_in = d_out = d, parameter bytes are d*d + d and per-sample I/O is
  // seq*2d; solve for the sequence length.
  const std::int64_t d = 64;
  const double params = static_cast<double>(d * d + d);
  const auto seq = std::max<std::int64_t>(
      1, std::llround(params * (1.0 - weight_fraction) / weight_fraction / static_cast<double>(2 * d)));
  LayerSpec l{"fc", LayerKind::Linear, {}, {}};
  l.params.set("out_features", d);
  return ModelGraph::create("weights", kFP32, 1, {l}, {{"fc", TensorShape({1, seq, d})}});
}

std::vector<MeasurementSample> synthesize_samples(const GroundTruth& t, int runs_per_size, double noise,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  auto jitter = [&] { return noise > 0 ? 1.0 + rng.real_in(-noise, noise) : 1.0; };
  std::vector<MeasurementSample> out;
  std::int64_t run = 0;
  for (int r = 0; r < runs_per_size; ++r) {
    out.push_back({run++, SampleKind::Idle, 0, 0, 0, 1.0, t.static_power * jitter()});
  }
  const double utils[] = {0.6, 0.8, 0.93, 1.0};
  const std::int64_t gemm[] = {1024, 2048, 4096, 8192};
  const std::int64_t stream[] = {1 << 22, 1 << 24, 1 << 26, 1 << 28};
  for (int i = 0; i < 4; ++i) {
    for (int r = 0; r < runs_per_size; ++r) {
      const double n = static_cast<double>(gemm[i]);
      const double w = 2 * n * n * n, q = 12 * n * n;
      const double time = w / (t.peak_flops * utils[i]) * jitter();
      const double e = t.eps_flop * w + t.eps_mop * q + t.static_power * time;
      out.push_back({run++, SampleKind::Compute, gemm[i], w, q, time, e / time * jitter()});
    }
    for (int r = 0; r < runs_per_size; ++r) {
      const double n = static_cast<double>(stream[i]);
      const double w = n, q = 8 * n;
      const double time = q / (t.peak_bw * utils[i]) * jitter();
      const double e = t.eps_flop * w + t.eps_mop * q + t.static_power * time;
      out.push_back({run++, SampleKind::Memory, stream[i], w, q, time, e / time * jitter()});
    }
  }
  return out;
}

DeviceRoofline device_with(double peak_tflops, double peak_gbps, std::int64_t gpu_mhz, std::int64_t mem_mhz,
                           double eps_mop_pj, double static_w) {
  DeviceRoofline d;
  d.device = "orin";
  d.mode = PowerMode{12, 2201, gpu_mhz, mem_mhz};
  d.precision = kFP32;
  d.peak_flops = peak_tflops * 1e12;
  d.peak_bw = peak_gbps * 1e9;
  d.eps_flop = 3.86e-12;
  d.eps_mop = eps_mop_pj * 1e-12;
  d.static_power = static_w;
  return d;
}

DeviceRoofline maxn_fp32() { return device_with(14.7, 164.4); }

DeviceRoofline random_device(Rng& rng) {
  DeviceRoofline d;
  d.device = "random";
  d.mode = PowerMode{rng.int_in(1, 12), rng.int_in(100, 2200), rng.int_in(100, 1300), rng.int_in(200, 3200)};
  d.peak_flops = rng.log_uniform(1e11, 1e14);
  d.peak_bw = rng.log_uniform(1e10, 1e12);
  d.eps_flop = rng.log_uniform(1e-13, 1e-10);
  d.eps_mop = rng.log_uniform(1e-12, 1e-9);
  d.static_power = rng.coin(0.1) ? 0.0 : rng.real_in(0.5, 60.0);
  return d;
}

}  // namespace testing_support
