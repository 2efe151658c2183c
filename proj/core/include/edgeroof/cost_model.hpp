// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

// Analytical FLOP (W) and memory-traffic (Q, bytes) counts per layer and per
// workload. All counts are exact 64-bit integers; intensity is a double.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgeroof/model_graph.hpp"
#include "edgeroof/shape_inference.hpp"

namespace edgeroof {

enum class CostMode { Inference, Training };

std::string_view to_string(CostMode mode) noexcept;

struct CostBreakdown {
  // W components
  std::int64_t flop_main = 0;  ///< multiply-accumulate and other core arithmetic
  std::int64_t flop_bias = 0;
  std::int64_t flop_act = 0;
  // Q components, bytes
  std::int64_t bytes_input = 0;
  std::int64_t bytes_weight = 0;
  std::int64_t bytes_bias = 0;
  std::int64_t bytes_output = 0;

  std::int64_t flop() const noexcept { return flop_main + flop_bias + flop_act; }
  std::int64_t mop() const noexcept { return bytes_input + bytes_weight + bytes_bias + bytes_output; }
  /// Bytes that do not scale with batch (weights and biases).
  std::int64_t param_bytes() const noexcept { return bytes_weight + bytes_bias; }

  CostBreakdown& operator+=(const CostBreakdown& o) noexcept;
  friend CostBreakdown operator+(CostBreakdown a, const CostBreakdown& b) noexcept { return a += b; }
  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

/// FLOP per element for each named activation (c_sigma). "exp" is the
/// exponential used inside softmax.
class ActivationCostTable {
 public:
  /// relu=1, sigmoid=4, tanh=4, hardswish=3, gelu=8, exp=2.
  ActivationCostTable();

  /// Defaults overlaid with a JSON object {"name": flops, ...}. Entries must be
  /// non-negative integers and relu must stay 1. Throws SchemaError.
  static ActivationCostTable from_json(std::string_view text);

  /// Throws UnsupportedKind for unknown names. An empty name costs 0.
  std::int64_t cost(std::string_view name) const;
  void set(const std::string& name, std::int64_t flops);
  const std::map<std::string, std::int64_t, std::less<>>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::int64_t, std::less<>> entries_;
};

struct CostOptions {
  ActivationCostTable activations;
  /// LSTM weight re-read factor per step (u).
  std::int64_t lstm_unroll = 1;
};

/// Forward/backward split of one layer's cost.
struct LayerCost {
  std::string id;
  LayerKind kind = LayerKind::Activation;
  CostBreakdown forward;
  CostBreakdown backward;  ///< zero in Inference mode
  /// Backward pass uses an extrapolated rule (recurrent/attention-style kinds).
  bool backward_extrapolated = false;

  CostBreakdown total() const { return forward + backward; }
};

struct WorkloadCost {
  std::vector<LayerCost> per_layer;  ///< topological order
  CostBreakdown total;
  CostMode mode = CostMode::Inference;
  std::int64_t batch = 1;
  Precision precision;

  const LayerCost* find(std::string_view id) const;
  bool any_extrapolated() const;
};

/// W = N*Cout*Ho*Wo*(2*(Cin/g)*K^2 + 1 + c_sigma);
/// Q = D*(N*Cin*Hin*Win + Cout*(Cin/g)*K^2 + Cout + N*Cout*Ho*Wo).
CostBreakdown conv_forward_cost(const ShapedLayer& layer, Precision precision,
                                const ActivationCostTable& activations = {});

/// Input-gradient plus weight-gradient terms; activation and bias excluded
/// from W, bias gradient counted once in Q.
CostBreakdown conv_backward_cost(const ShapedLayer& layer, Precision precision);

LayerCost layer_cost(const ShapedLayer& layer, CostMode mode, Precision precision, const CostOptions& options = {});

/// Errors from individual layers are rethrown with the layer id attached.
WorkloadCost aggregate_workload(const ShapedGraph& graph, CostMode mode, Precision precision,
                                const CostOptions& options = {});

/// W / Q. Throws ZeroMemory when Q = 0.
double arithmetic_intensity(const CostBreakdown& cost);

struct BatchPoint {
  std::int64_t batch = 1;
  double ai = 0.0;
  std::int64_t flop = 0;
  std::int64_t mop = 0;
};

struct BatchSweep {
  std::vector<BatchPoint> points;
  /// W_1 / Q_io,1, with Q_io the batch-proportional (non-parameter) bytes at
  /// batch 1. Infinite when the model moves no activation bytes.
  double ai_limit = 0.0;
  /// Parameter bytes over total bytes at batch 1.
  double weight_fraction = 0.0;
};

/// Throws InvalidArgument for an empty list or batch < 1.
BatchSweep batch_ai_sweep(const ModelGraph& graph, const std::vector<std::int64_t>& batches, CostMode mode,
                          Precision precision, const CostOptions& options = {});

/// CSV with header layer_id,kind,W_flop,Q_bytes,AI. AI has 6 significant
/// digits and is left empty for layers that move no bytes.
std::string per_layer_csv(const WorkloadCost& cost);

}  // namespace edgeroof
