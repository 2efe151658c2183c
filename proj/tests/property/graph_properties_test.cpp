// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "edgeroof/cost_model.hpp"
#include "edgeroof/model_io.hpp"
#include "edgeroof/shape_inference.hpp"
#include "support/generators.hpp"
#include "support/onnx_builder.hpp"

namespace edgeroof {
namespace {

using testing_support::Rng;

TEST(GraphProperties, TopologicalOrderRespectsEdges) {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    Rng rng(seed);
    auto g = testing_support::random_dag(rng, static_cast<int>(rng.int_in(1, 30)));
    auto order = topological_order(g);
    SCOPED_TRACE(seed);
    ASSERT_EQ(order.size(), g.layers().size());
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    ASSERT_EQ(pos.size(), order.size());  // permutation
    for (const auto& l : g.layers()) {
      for (const auto& in : l.inputs) EXPECT_LT(pos.at(in), pos.at(l.id));
    }
    EXPECT_EQ(order, topological_order(g));
  }
}

TEST(GraphProperties, SerializeParseRoundTrip) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    auto g = rng.coin() ? testing_support::random_model(rng) : testing_support::random_dag(rng, 12);
    auto text = serialize_model(g);
    auto back = parse_model(text);
    EXPECT_EQ(back, g) << "seed " << seed;
    EXPECT_EQ(serialize_model(back), text);
  }
}

TEST(GraphProperties, ShapeInferenceIsBatchLinear) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    auto g = std::make_shared<const ModelGraph>(testing_support::random_model(rng));
    const auto batch = rng.int_in(1, 8);
    auto one = infer_shapes(g, batch);
    auto two = infer_shapes(g, 2 * batch);
    ASSERT_EQ(one.layers().size(), two.layers().size());
    for (std::size_t i = 0; i < one.layers().size(); ++i) {
      const auto& a = one.layers()[i].output;
      const auto& b = two.layers()[i].output;
      ASSERT_EQ(a.rank(), b.rank());
      EXPECT_EQ(b[0], 2 * a[0]) << "seed " << seed;
      for (std::size_t d = 1; d < a.rank(); ++d) EXPECT_EQ(a[d], b[d]);
    }
  }
}

TEST(GraphProperties, OnnxAndIrCostsAgree) {
  using testing_support::OnnxAttr;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    auto c = testing_support::random_conv_case(rng);
    testing_support::OnnxBuilder b;
    b.input("x", {c.n, c.c_in, c.h, c.w})
        .float_initializer("w", {c.c_out, c.c_in / c.groups, c.kernel, c.kernel})
        .float_initializer("b", {c.c_out})
        .node("Conv", {"x", "w", "b"}, {"y"},
              {OnnxAttr::Ints("kernel_shape", {c.kernel, c.kernel}), OnnxAttr::Ints("strides", {c.stride, c.stride}),
               OnnxAttr::Ints("pads", {c.pad, c.pad, c.pad, c.pad}),
               OnnxAttr::Ints("dilations", {c.dilation, c.dilation}), OnnxAttr::Int("group", c.groups)},
              "conv");
    std::string act;
    if (c.act_cost > 0) {
      b.node("Relu", {"y"}, {"z"}, {}, "relu");
      act = "relu";
    }
    auto onnx = import_onnx(b.bytes());
    auto ir = testing_support::conv_graph(c);
    auto from_onnx = aggregate_workload(infer_shapes(onnx, c.n), CostMode::Inference, kFP32);
    auto from_ir = aggregate_workload(infer_shapes(ir, c.n), CostMode::Inference, kFP32);
    // The importer keeps Relu as its own Activation layer; the conv itself must match.
    EXPECT_EQ(from_onnx.per_layer[0].forward, from_ir.per_layer[0].forward) << "seed " << seed;
  }
}

}  // namespace
}  // namespace edgeroof
