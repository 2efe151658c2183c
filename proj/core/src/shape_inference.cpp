// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/shape_inference.hpp"

#include <unordered_map>

#include "edgeroof/error.hpp"

namespace edgeroof {

namespace {

[[noreturn]] void mismatch(const LayerSpec& layer, const std::string& what) {
  fail(ErrorCode::ShapeMismatch, "layer '" + layer.id + "': " + what);
}

void expect_rank(const LayerSpec& layer, const TensorShape& shape, std::size_t rank) {
  if (shape.rank() != rank) {
    mismatch(layer, std::string(to_string(layer.kind)) + " expects rank " + std::to_string(rank) + ", got " +
                        shape.to_string());
  }
}

std::size_t normalize_axis(const LayerSpec& layer, std::int64_t axis, std::size_t rank) {
  auto r = static_cast<std::int64_t>(rank);
  if (axis < -r || axis >= r) mismatch(layer, "axis " + std::to_string(axis) + " out of range");
  return static_cast<std::size_t>(axis < 0 ? axis + r : axis);
}

TensorShape spatial_window(const LayerSpec& layer, const TensorShape& in, std::int64_t channels,
                           std::int64_t kernel, std::int64_t stride, std::int64_t padding, std::int64_t dilation) {
  expect_rank(layer, in, 4);
  auto h = conv_output_extent(in[2], kernel, stride, padding, dilation);
  auto w = conv_output_extent(in[3], kernel, stride, padding, dilation);
  if (!h || !w) {
    fail(ErrorCode::NonPositiveOutput,
         "layer '" + layer.id + "': kernel " + std::to_string(kernel) + " larger than padded input " + in.to_string());
  }
  return TensorShape({in[0], channels, *h, *w});
}

}  // namespace

std::optional<std::int64_t> conv_output_extent(std::int64_t in, std::int64_t kernel, std::int64_t stride,
                                               std::int64_t padding, std::int64_t dilation) {
  std::int64_t span = in + 2 * padding - dilation * (kernel - 1) - 1;
  if (span < 0) return std::nullopt;
  return span / stride + 1;
}

TensorShape infer_layer_shape(const LayerSpec& layer, const std::vector<TensorShape>& inputs) {
  if (inputs.empty()) mismatch(layer, "no input shapes");
  const auto& in = inputs.front();
  const auto& p = layer.params;

  switch (layer.kind) {
    case LayerKind::Conv2d: {
      expect_rank(layer, in, 4);
      auto groups = p.get_int_or("groups", 1);
      if (in[1] % groups != 0) {
        mismatch(layer, "input channels " + std::to_string(in[1]) + " not divisible by groups " +
                            std::to_string(groups));
      }
      return spatial_window(layer, in, p.get_int("out_channels"), p.get_int("kernel"), p.get_int_or("stride", 1),
                            p.get_int_or("padding", 0), p.get_int_or("dilation", 1));
    }
    case LayerKind::Pool2d: {
      expect_rank(layer, in, 4);
      if (p.get_int_or("global", 0) != 0) return TensorShape({in[0], in[1], 1, 1});
      auto kernel = p.get_int("kernel");
      return spatial_window(layer, in, in[1], kernel, p.get_int_or("stride", kernel), p.get_int_or("padding", 0), 1);
    }
    case LayerKind::Linear: {
      if (in.rank() < 2) mismatch(layer, "Linear expects rank >= 2, got " + in.to_string());
      auto dims = in.dims();
      dims.back() = p.get_int("out_features");
      return TensorShape(std::move(dims));
    }
    case LayerKind::BatchNorm:
      if (in.rank() < 2) mismatch(layer, "BatchNorm expects rank >= 2, got " + in.to_string());
      return in;
    case LayerKind::Activation:
    case LayerKind::LayerNorm:
      return in;
    case LayerKind::Softmax:
      normalize_axis(layer, p.get_int_or("axis", -1), in.rank());
      return in;
    case LayerKind::Elementwise:
      for (const auto& other : inputs) {
        if (other != in) mismatch(layer, "elementwise operands differ: " + in.to_string() + " vs " + other.to_string());
      }
      return in;
    case LayerKind::Embedding:
      expect_rank(layer, in, 2);
      return TensorShape({in[0], in[1], p.get_int("dim")});
    case LayerKind::LSTMCell:
      expect_rank(layer, in, 3);
      return TensorShape({in[0], in[1], p.get_int("hidden")});
    case LayerKind::Attention:
      expect_rank(layer, in, 3);
      if (in[2] % p.get_int("heads") != 0) {
        mismatch(layer, "model width " + std::to_string(in[2]) + " not divisible by heads");
      }
      return in;
    case LayerKind::Transpose: {
      std::vector<std::int64_t> dims(in.rank());
      if (auto perm = p.find_list("perm")) {
        if (perm->size() != in.rank()) mismatch(layer, "perm rank differs from input " + in.to_string());
        for (std::size_t i = 0; i < perm->size(); ++i) dims[i] = in[static_cast<std::size_t>((*perm)[i])];
      } else {
        // Default: keep batch, reverse the rest.
        dims[0] = in[0];
        for (std::size_t i = 1; i < in.rank(); ++i) dims[i] = in[in.rank() - i];
      }
      return TensorShape(std::move(dims));
    }
    case LayerKind::Reshape: {
      auto per_sample = in.elements() / in[0];
      std::vector<std::int64_t> dims{in[0]};
      if (auto shape = p.find_list("shape")) {
        std::int64_t known = 1;
        std::optional<std::size_t> hole;
        for (std::size_t i = 0; i < shape->size(); ++i) {
          if ((*shape)[i] == -1) {
            hole = i + 1;
            dims.push_back(1);
          } else {
            known *= (*shape)[i];
            dims.push_back((*shape)[i]);
          }
        }
        if (hole) {
          if (per_sample % known != 0) mismatch(layer, "cannot infer -1 extent for " + in.to_string());
          dims[*hole] = per_sample / known;
        }
      } else {
        dims.push_back(per_sample);
      }
      TensorShape out(std::move(dims));
      if (out.elements() != in.elements()) {
        mismatch(layer, "reshape changes element count: " + in.to_string() + " -> " + out.to_string());
      }
      return out;
    }
    case LayerKind::Concat: {
      auto axis = normalize_axis(layer, p.get_int_or("axis", 1), in.rank());
      if (axis == 0) mismatch(layer, "concatenation along the batch axis is not supported");
      auto dims = in.dims();
      for (std::size_t k = 1; k < inputs.size(); ++k) {
        const auto& other = inputs[k];
        if (other.rank() != in.rank()) mismatch(layer, "concat operands differ in rank");
        for (std::size_t i = 0; i < in.rank(); ++i) {
          if (i != axis && other[i] != in[i]) {
            mismatch(layer, "concat operands differ off-axis: " + in.to_string() + " vs " + other.to_string());
          }
        }
        dims[axis] += other[axis];
      }
      return TensorShape(std::move(dims));
    }
  }
  fail(ErrorCode::Internal, "unhandled layer kind");
}

ShapedGraph::ShapedGraph(std::shared_ptr<const ModelGraph> graph, std::int64_t batch, std::vector<ShapedLayer> layers)
    : graph_(std::move(graph)), batch_(batch), layers_(std::move(layers)) {}

const ShapedLayer* ShapedGraph::find(std::string_view id) const {
  for (const auto& l : layers_) {
    if (l.spec->id == id) return &l;
  }
  return nullptr;
}

ShapedGraph infer_shapes(std::shared_ptr<const ModelGraph> graph, std::int64_t batch) {
  if (batch < 1) fail(ErrorCode::InvalidArgument, "batch must be >= 1");
  const auto& layers = graph->layers();
  std::unordered_map<std::string_view, TensorShape> outputs;
  std::vector<ShapedLayer> shaped;
  shaped.reserve(layers.size());

  for (auto index : topological_indices(layers)) {
    const auto& layer = layers[index];
    ShapedLayer sl;
    sl.spec = &layer;
    if (layer.is_source()) {
      auto it = graph->input_shapes().find(layer.id);
      if (it == graph->input_shapes().end()) {
        fail(ErrorCode::ShapeMissing, "source layer '" + layer.id + "' has no input shape");
      }
      sl.inputs.push_back(it->second.with_batch(batch));
    } else {
      for (const auto& in : layer.inputs) sl.inputs.push_back(outputs.at(in));
    }
    sl.output = infer_layer_shape(layer, sl.inputs);
    outputs.emplace(layer.id, sl.output);
    shaped.push_back(std::move(sl));
  }
  return ShapedGraph(std::move(graph), batch, std::move(shaped));
}

ShapedGraph infer_shapes(const ModelGraph& graph, std::int64_t batch) {
  return infer_shapes(std::make_shared<const ModelGraph>(graph), batch);
}

}  // namespace edgeroof
