// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "edgeroof/model_graph.hpp"

namespace edgeroof {

struct ShapedLayer {
  const LayerSpec* spec = nullptr;  ///< points into ShapedGraph::graph()
  std::vector<TensorShape> inputs;
  TensorShape output;
};

/// A ModelGraph at a concrete batch size, with every layer's input and output
/// shapes resolved. Layers are held in topological order. Shares ownership of
/// the underlying graph, so copies are cheap and the graph stays immutable.
class ShapedGraph {
 public:
  ShapedGraph(std::shared_ptr<const ModelGraph> graph, std::int64_t batch, std::vector<ShapedLayer> layers);

  const ModelGraph& graph() const noexcept { return *graph_; }
  std::int64_t batch() const noexcept { return batch_; }
  const std::vector<ShapedLayer>& layers() const noexcept { return layers_; }
  const ShapedLayer* find(std::string_view id) const;

 private:
  std::shared_ptr<const ModelGraph> graph_;
  std::int64_t batch_;
  std::vector<ShapedLayer> layers_;
};

/// Conv/pool output extent: floor((in + 2p - dl*(K-1) - 1)/s) + 1.
/// Returns nullopt when the kernel does not fit the padded input.
std::optional<std::int64_t> conv_output_extent(std::int64_t in, std::int64_t kernel, std::int64_t stride,
                                               std::int64_t padding, std::int64_t dilation);

/// Propagates shapes through the graph with dims[0] of every source input
/// replaced by `batch`. Errors: ShapeMismatch, NonPositiveOutput,
/// InvalidArgument (batch < 1).
ShapedGraph infer_shapes(std::shared_ptr<const ModelGraph> graph, std::int64_t batch);
ShapedGraph infer_shapes(const ModelGraph& graph, std::int64_t batch);

/// Output shape of one layer given its input shapes.
TensorShape infer_layer_shape(const LayerSpec& layer, const std::vector<TensorShape>& inputs);

}  // namespace edgeroof
