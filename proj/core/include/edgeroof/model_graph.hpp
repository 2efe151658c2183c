// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

// In-memory representation of a DNN workload: a DAG of typed layers with
// integer shape parameters. Weights are never stored; only extents matter.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace edgeroof {

enum class PrecisionKind { FP32, TF32, FP16, INT8 };

/// Arithmetic precision of a workload; fixes the element size D in bytes.
struct Precision {
  PrecisionKind kind = PrecisionKind::FP32;

  constexpr std::int64_t bytes() const noexcept {
    switch (kind) {
      case PrecisionKind::FP32:
      case PrecisionKind::TF32:
        return 4;
      case PrecisionKind::FP16:
        return 2;
      case PrecisionKind::INT8:
        return 1;
    }
    return 4;
  }
  std::string_view name() const noexcept;

  /// Case-insensitive; throws SchemaError for anything else.
  static Precision parse(std::string_view text);

  friend constexpr bool operator==(Precision, Precision) = default;
};

inline constexpr Precision kFP32{PrecisionKind::FP32};
inline constexpr Precision kTF32{PrecisionKind::TF32};
inline constexpr Precision kFP16{PrecisionKind::FP16};
inline constexpr Precision kINT8{PrecisionKind::INT8};

/// Ordered positive extents; dims[0] is always the batch dimension.
class TensorShape {
 public:
  TensorShape() = default;
  /// Throws SchemaError if empty or any extent < 1.
  explicit TensorShape(std::vector<std::int64_t> dims);

  const std::vector<std::int64_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::int64_t operator[](std::size_t i) const { return dims_.at(i); }
  std::int64_t batch() const { return dims_.at(0); }
  std::int64_t elements() const noexcept;

  TensorShape with_batch(std::int64_t batch) const;
  std::string to_string() const;

  friend bool operator==(const TensorShape&, const TensorShape&) = default;

 private:
  std::vector<std::int64_t> dims_;
};

enum class LayerKind {
  Conv2d,
  Linear,
  Activation,
  Pool2d,
  BatchNorm,
  Elementwise,
  Softmax,
  LayerNorm,
  Embedding,
  LSTMCell,
  Attention,
  Transpose,
  Reshape,
  Concat,
};

std::string_view to_string(LayerKind kind) noexcept;
/// Throws UnknownKind.
LayerKind parse_layer_kind(std::string_view text);
/// True for kinds that own trainable parameters.
bool has_parameters(LayerKind kind) noexcept;

using ParamValue = std::variant<std::int64_t, std::vector<std::int64_t>, std::string>;

/// Kind-specific parameters keyed by name (kernel, stride, activation, ...).
class LayerParams {
 public:
  void set(const std::string& name, ParamValue value) { values_[name] = std::move(value); }
  bool contains(const std::string& name) const { return values_.contains(name); }

  /// Throws SchemaError when missing or of the wrong type.
  std::int64_t get_int(const std::string& name) const;
  std::int64_t get_int_or(const std::string& name, std::int64_t fallback) const;
  const std::vector<std::int64_t>& get_list(const std::string& name) const;
  std::optional<std::vector<std::int64_t>> find_list(const std::string& name) const;
  std::optional<std::string> find_string(const std::string& name) const;

  const std::map<std::string, ParamValue>& values() const noexcept { return values_; }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;

 private:
  std::map<std::string, ParamValue> values_;
};

struct LayerSpec {
  std::string id;
  LayerKind kind = LayerKind::Activation;
  LayerParams params;
  std::vector<std::string> inputs;

  bool is_source() const noexcept { return inputs.empty(); }
  /// Activation name for kinds that carry one; empty when absent.
  std::string activation() const;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// A validated, immutable workload graph. Construct through
/// ModelGraph::create (or parse_model / import_onnx), which enforce
/// unique ids, resolvable inputs, acyclicity and per-kind parameters.
class ModelGraph {
 public:
  static ModelGraph create(std::string name, Precision precision, std::int64_t default_batch,
                           std::vector<LayerSpec> layers,
                           std::map<std::string, TensorShape> input_shapes);

  const std::string& name() const noexcept { return name_; }
  Precision precision() const noexcept { return precision_; }
  std::int64_t default_batch() const noexcept { return default_batch_; }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  const std::map<std::string, TensorShape>& input_shapes() const noexcept { return input_shapes_; }

  /// Declaration index of a layer id, or nullopt.
  std::optional<std::size_t> index_of(std::string_view id) const;
  const LayerSpec& layer(std::string_view id) const;

  friend bool operator==(const ModelGraph&, const ModelGraph&) = default;

 private:
  ModelGraph() = default;

  std::string name_;
  Precision precision_;
  std::int64_t default_batch_ = 1;
  std::vector<LayerSpec> layers_;
  std::map<std::string, TensorShape> input_shapes_;
};

/// Kahn's algorithm; among ready layers the earliest-declared goes first.
/// Throws CyclicGraph naming the layers left on a cycle.
std::vector<std::string> topological_order(const ModelGraph& graph);

/// Same ordering, but as declaration indices. Works on an unvalidated layer
/// list so ModelGraph::create can use it.
std::vector<std::size_t> topological_indices(const std::vector<LayerSpec>& layers);

}  // namespace edgeroof
