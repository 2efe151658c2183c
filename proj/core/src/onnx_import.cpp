// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstring>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "edgeroof/error.hpp"
#include "edgeroof/model_io.hpp"
#include "edgeroof/shape_inference.hpp"
#include "onnx_subset.pb.h"

namespace edgeroof {

namespace {

namespace pb = edgeroof_onnx;

constexpr std::int64_t kMinOpset = 13;

enum OnnxType : int { kFloat = 1, kInt8 = 3, kInt32 = 6, kInt64 = 7, kFloat16 = 10 };

struct Constant {
  std::vector<std::int64_t> dims;
  std::vector<std::int64_t> ints;  // only filled for integer tensors
};

std::vector<std::int64_t> tensor_ints(const pb::TensorProto& t) {
  std::vector<std::int64_t> out;
  if (t.data_type() == kInt64) {
    if (t.int64_data_size() > 0) {
      out.assign(t.int64_data().begin(), t.int64_data().end());
    } else {
      const auto& raw = t.raw_data();
      out.resize(raw.size() / sizeof(std::int64_t));
      std::memcpy(out.data(), raw.data(), out.size() * sizeof(std::int64_t));
    }
  } else if (t.data_type() == kInt32) {
    if (t.int32_data_size() > 0) {
      out.assign(t.int32_data().begin(), t.int32_data().end());
    } else {
      const auto& raw = t.raw_data();
      std::vector<std::int32_t> tmp(raw.size() / sizeof(std::int32_t));
      std::memcpy(tmp.data(), raw.data(), tmp.size() * sizeof(std::int32_t));
      out.assign(tmp.begin(), tmp.end());
    }
  }
  return out;
}

Constant to_constant(const pb::TensorProto& t) {
  return {std::vector<std::int64_t>(t.dims().begin(), t.dims().end()), tensor_ints(t)};
}

const pb::AttributeProto* find_attr(const pb::NodeProto& node, std::string_view name) {
  for (const auto& a : node.attribute()) {
    if (a.name() == name) return &a;
  }
  return nullptr;
}

std::int64_t attr_int(const pb::NodeProto& node, std::string_view name, std::int64_t fallback) {
  const auto* a = find_attr(node, name);
  return a ? a->i() : fallback;
}

std::vector<std::int64_t> attr_ints(const pb::NodeProto& node, std::string_view name) {
  const auto* a = find_attr(node, name);
  if (!a) return {};
  return {a->ints().begin(), a->ints().end()};
}

std::string attr_string(const pb::NodeProto& node, std::string_view name) {
  const auto* a = find_attr(node, name);
  return a ? a->s() : std::string();
}

Precision precision_of(int elem_type) {
  switch (elem_type) {
    case kFloat16:
      return kFP16;
    case kInt8:
      return kINT8;
    default:
      return kFP32;
  }
}

[[noreturn]] void bad_node(const pb::NodeProto& node, const std::string& what) {
  fail(ErrorCode::DecodeError, node.op_type() + " node '" + node.name() + "': " + what);
}

// All entries of `values` must be identical; returns that value (or fallback
// when empty).
std::int64_t uniform(const pb::NodeProto& node, const std::vector<std::int64_t>& values, std::int64_t fallback,
                     std::string_view what) {
  if (values.empty()) return fallback;
  for (auto v : values) {
    if (v != values.front()) bad_node(node, "non-uniform " + std::string(what) + " is not supported");
  }
  return values.front();
}

class Importer {
 public:
  explicit Importer(const pb::ModelProto& model) : model_(model), graph_(model.graph()) {}

  ModelGraph run() {
    check_opset();
    collect_constants();
    collect_inputs();

    for (int i = 0; i < graph_.node_size(); ++i) convert(graph_.node(i), i);

    if (!unsupported_.empty()) {
      std::string list;
      for (const auto& op : unsupported_) list += (list.empty() ? "" : ", ") + op;
      fail(ErrorCode::UnsupportedOp, list);
    }

    std::string name = graph_.name().empty() ? "onnx_model" : graph_.name();
    return ModelGraph::create(name, precision_, default_batch_, std::move(layers_), std::move(input_shapes_));
  }

 private:
  // Where an ONNX value comes from.
  struct Source {
    std::optional<std::string> layer;  // producing layer id; empty for a graph input
    TensorShape shape;
    bool poisoned = false;  // produced by an unsupported node
  };

  void check_opset() {
    std::optional<std::int64_t> opset;
    for (const auto& o : model_.opset_import()) {
      if (o.domain().empty() || o.domain() == "ai.onnx") opset = o.version();
    }
    if (!opset) fail(ErrorCode::DecodeError, "model declares no default-domain opset");
    if (*opset < kMinOpset) {
      fail(ErrorCode::DecodeError, "opset " + std::to_string(*opset) + " < " + std::to_string(kMinOpset));
    }
  }

  void collect_constants() {
    for (const auto& t : graph_.initializer()) constants_.emplace(t.name(), to_constant(t));
    for (const auto& node : graph_.node()) {
      if (node.op_type() == "Identity" && node.input_size() == 1 && node.output_size() == 1) {
        // Exporters alias initializers through Identity; keep them constant.
        if (auto it = constants_.find(node.input(0)); it != constants_.end()) {
          constants_.emplace(node.output(0), Constant(it->second));
        }
        continue;
      }
      if (node.op_type() != "Constant" || node.output_size() == 0) continue;
      if (const auto* value = find_attr(node, "value"); value && value->has_t()) {
        constants_.emplace(node.output(0), to_constant(value->t()));
      } else if (const auto* ints = find_attr(node, "value_ints")) {
        Constant c{{ints->ints_size()}, {ints->ints().begin(), ints->ints().end()}};
        constants_.emplace(node.output(0), std::move(c));
      } else if (const auto* one = find_attr(node, "value_int")) {
        constants_.emplace(node.output(0), Constant{{}, {one->i()}});
      } else {
        constants_.emplace(node.output(0), Constant{});
      }
    }
  }

  void collect_inputs() {
    bool first = true;
    for (const auto& vi : graph_.input()) {
      if (constants_.contains(vi.name())) continue;
      if (!vi.type().has_tensor_type() || !vi.type().tensor_type().has_shape()) {
        fail(ErrorCode::MissingShape, "graph input '" + vi.name() + "' has no shape");
      }
      const auto& tt = vi.type().tensor_type();
      std::vector<std::int64_t> dims;
      for (int d = 0; d < tt.shape().dim_size(); ++d) {
        const auto& dim = tt.shape().dim(d);
        if (dim.has_dim_value() && dim.dim_value() >= 1) {
          dims.push_back(dim.dim_value());
        } else if (d == 0) {
          dims.push_back(1);  // symbolic batch
        } else {
          fail(ErrorCode::MissingShape,
               "graph input '" + vi.name() + "' dimension " + std::to_string(d) + " is not static");
        }
      }
      if (dims.empty()) fail(ErrorCode::MissingShape, "graph input '" + vi.name() + "' is a scalar");
      if (first) {
        precision_ = precision_of(tt.elem_type());
        default_batch_ = dims[0];
        first = false;
      }
      values_.emplace(vi.name(), Source{std::nullopt, TensorShape(std::move(dims))});
    }
  }

  std::string unique_id(const pb::NodeProto& node, int index) {
    std::string id = node.name();
    if (id.empty() || ids_.contains(id)) id = node.op_type() + "_" + std::to_string(index);
    while (ids_.contains(id)) id += "_";
    ids_.insert(id);
    return id;
  }

  bool is_constant(const std::string& name) const { return constants_.contains(name); }

  const Constant& constant(const pb::NodeProto& node, int slot) {
    if (node.input_size() <= slot || !is_constant(node.input(slot))) {
      bad_node(node, "input " + std::to_string(slot) + " must be a constant tensor");
    }
    return constants_.at(node.input(slot));
  }

  // Non-constant inputs, in order.
  std::vector<std::string> activation_inputs(const pb::NodeProto& node) const {
    std::vector<std::string> out;
    for (const auto& in : node.input()) {
      if (!in.empty() && !is_constant(in)) out.push_back(in);
    }
    return out;
  }

  void mark_poisoned(const pb::NodeProto& node) {
    for (const auto& out : node.output()) values_[out] = Source{std::nullopt, TensorShape(), true};
  }

  void unsupported(const pb::NodeProto& node, const std::string& label) {
    unsupported_.insert(label);
    mark_poisoned(node);
  }

  void convert(const pb::NodeProto& node, int index) {
    const auto& op = node.op_type();
    if (!node.domain().empty() && node.domain() != "ai.onnx") {
      unsupported(node, node.domain() + "::" + op);
      return;
    }

    auto acts = activation_inputs(node);
    for (const auto& in : acts) {
      auto it = values_.find(in);
      if (it == values_.end()) bad_node(node, "input '" + in + "' is not produced by any earlier node");
      if (it->second.poisoned) {
        mark_poisoned(node);
        // Still record the op itself if it is unmapped.
        if (!is_mapped(op)) unsupported_.insert(op);
        return;
      }
    }

    if (op == "Identity" || op == "Constant") {
      if (op == "Identity" && !acts.empty()) values_[node.output(0)] = values_.at(acts.front());
      return;
    }

    LayerSpec layer;
    auto& p = layer.params;
    bool seq_first = false;

    if (op == "Conv") {
      const auto& w = constant(node, 1);
      if (w.dims.size() != 4) bad_node(node, "only 2-D convolutions are supported");
      if (w.dims[2] != w.dims[3]) bad_node(node, "non-square kernels are not supported");
      auto auto_pad = attr_string(node, "auto_pad");
      if (!auto_pad.empty() && auto_pad != "NOTSET" && auto_pad != "VALID") bad_node(node, "auto_pad " + auto_pad);
      layer.kind = LayerKind::Conv2d;
      p.set("out_channels", w.dims[0]);
      p.set("kernel", w.dims[2]);
      p.set("stride", uniform(node, attr_ints(node, "strides"), 1, "strides"));
      p.set("padding", uniform(node, attr_ints(node, "pads"), 0, "pads"));
      p.set("dilation", uniform(node, attr_ints(node, "dilations"), 1, "dilations"));
      p.set("groups", attr_int(node, "group", 1));
    } else if (op == "Gemm") {
      const auto& b = constant(node, 1);
      if (b.dims.size() != 2) bad_node(node, "weight must be 2-D");
      if (attr_int(node, "transA", 0) != 0) bad_node(node, "transA is not supported");
      layer.kind = LayerKind::Linear;
      p.set("out_features", attr_int(node, "transB", 0) != 0 ? b.dims[0] : b.dims[1]);
    } else if (op == "MatMul") {
      if (node.input_size() < 2 || !is_constant(node.input(1))) {
        unsupported(node, "MatMul(activation x activation)");
        return;
      }
      const auto& b = constants_.at(node.input(1));
      if (b.dims.size() != 2) bad_node(node, "weight must be 2-D");
      layer.kind = LayerKind::Linear;
      p.set("out_features", b.dims[1]);
    } else if (op == "Relu" || op == "Sigmoid" || op == "Tanh" || op == "HardSwish") {
      layer.kind = LayerKind::Activation;
      std::string name = op;
      std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
      p.set("activation", name);
    } else if (op == "MaxPool" || op == "AveragePool") {
      auto kernel = attr_ints(node, "kernel_shape");
      if (kernel.size() != 2) bad_node(node, "only 2-D pooling is supported");
      if (attr_int(node, "ceil_mode", 0) != 0) bad_node(node, "ceil_mode is not supported");
      layer.kind = LayerKind::Pool2d;
      p.set("kernel", uniform(node, kernel, 1, "kernel_shape"));
      p.set("stride", uniform(node, attr_ints(node, "strides"), 1, "strides"));
      p.set("padding", uniform(node, attr_ints(node, "pads"), 0, "pads"));
      p.set("mode", std::string(op == "MaxPool" ? "max" : "avg"));
    } else if (op == "GlobalAveragePool" || op == "GlobalMaxPool") {
      if (op == "GlobalMaxPool") {
        unsupported(node, op);
        return;
      }
      layer.kind = LayerKind::Pool2d;
      p.set("global", std::int64_t{1});
      p.set("mode", std::string("avg"));
    } else if (op == "BatchNormalization") {
      layer.kind = LayerKind::BatchNorm;
      acts.resize(std::min<std::size_t>(acts.size(), 1));
    } else if (op == "LayerNormalization") {
      layer.kind = LayerKind::LayerNorm;
      acts.resize(std::min<std::size_t>(acts.size(), 1));
    } else if (op == "Add" || op == "Mul") {
      layer.kind = LayerKind::Elementwise;
      p.set("op", std::string(op == "Add" ? "add" : "mul"));
    } else if (op == "Softmax") {
      layer.kind = LayerKind::Softmax;
      p.set("axis", attr_int(node, "axis", -1));
    } else if (op == "Gather") {
      if (!is_constant(node.input(0)) || constants_.at(node.input(0)).dims.size() != 2 || acts.size() != 1) {
        unsupported(node, "Gather(non-embedding)");
        return;
      }
      const auto& table = constants_.at(node.input(0));
      layer.kind = LayerKind::Embedding;
      p.set("vocab", table.dims[0]);
      p.set("dim", table.dims[1]);
    } else if (op == "LSTM") {
      if (attr_string(node, "direction") == "bidirectional") {
        unsupported(node, "LSTM(bidirectional)");
        return;
      }
      layer.kind = LayerKind::LSTMCell;
      p.set("hidden", attr_int(node, "hidden_size", 0));
      acts.resize(std::min<std::size_t>(acts.size(), 1));  // initial h/c states are not costed
      seq_first = attr_int(node, "layout", 0) == 0;
    } else if (op == "Transpose") {
      auto perm = attr_ints(node, "perm");
      if (perm.empty() || perm[0] != 0) {
        unsupported(node, "Transpose(batch axis)");
        return;
      }
      layer.kind = LayerKind::Transpose;
      p.set("perm", perm);
    } else if (op == "Reshape") {
      layer.kind = LayerKind::Reshape;
      auto target = constant(node, 1).ints;
      if (target.empty()) bad_node(node, "empty target shape");
      const auto& in = values_.at(acts.front()).shape;
      std::vector<std::int64_t> dims;
      for (std::size_t i = 1; i < target.size(); ++i) {
        auto d = target[i];
        if (d == 0) {
          if (i >= in.rank()) bad_node(node, "0 extent refers past the input rank");
          d = in[i];
        }
        dims.push_back(d);
      }
      if (!dims.empty()) p.set("shape", dims);
    } else if (op == "Flatten") {
      if (attr_int(node, "axis", 1) != 1) bad_node(node, "only axis=1 is supported");
      layer.kind = LayerKind::Reshape;
    } else if (op == "Concat") {
      layer.kind = LayerKind::Concat;
      p.set("axis", attr_int(node, "axis", 1));
    } else {
      unsupported(node, op);
      return;
    }

    if (acts.empty()) bad_node(node, "node has no activation input");

    layer.id = unique_id(node, index);
    std::vector<TensorShape> in_shapes;
    bool from_graph_input = false;
    for (const auto& in : acts) {
      const auto& src = values_.at(in);
      in_shapes.push_back(src.shape);
      if (seq_first && !src.layer && src.shape.rank() == 3) {
        // ONNX LSTM defaults to (L, N, d); the IR is batch-first.
        in_shapes.back() = TensorShape({src.shape[1], src.shape[0], src.shape[2]});
      }
      if (src.layer) {
        layer.inputs.push_back(*src.layer);
      } else {
        from_graph_input = true;
      }
    }
    if (from_graph_input && acts.size() > 1) {
      // Mixed graph-input/layer operands: route graph inputs through a
      // zero-cost pass-through so the layer keeps a single kind of input.
      layer.inputs.clear();
      for (const auto& in : acts) layer.inputs.push_back(passthrough_for(in));
    }

    TensorShape out;
    try {
      out = infer_layer_shape(layer, in_shapes);
    } catch (const Error& e) {
      throw e.with_context("importing " + op + " node '" + node.name() + "'");
    }
    if (layer.inputs.empty()) input_shapes_.emplace(layer.id, in_shapes.front());

    const std::string id = layer.id;
    layers_.push_back(std::move(layer));
    for (const auto& o : node.output()) {
      if (!o.empty()) values_[o] = Source{id, out};
    }
  }

  std::string passthrough_for(const std::string& value) {
    auto& src = values_.at(value);
    if (src.layer) return *src.layer;
    std::string id = "input_" + value;
    while (ids_.contains(id)) id += "_";
    ids_.insert(id);
    LayerSpec layer;
    layer.id = id;
    layer.kind = LayerKind::Reshape;
    std::vector<std::int64_t> dims(src.shape.dims().begin() + 1, src.shape.dims().end());
    if (!dims.empty()) layer.params.set("shape", dims);
    input_shapes_.emplace(id, src.shape);
    layers_.push_back(std::move(layer));
    src.layer = id;
    return id;
  }

  static bool is_mapped(const std::string& op) {
    static const std::set<std::string> mapped = {
        "Conv",    "Gemm",   "MatMul",    "Relu",    "Sigmoid",   "Tanh",     "HardSwish",
        "MaxPool", "AveragePool", "GlobalAveragePool", "BatchNormalization", "LayerNormalization",
        "Add",     "Mul",    "Softmax",   "Gather",  "LSTM",      "Transpose", "Reshape",
        "Flatten", "Concat", "Identity",  "Constant"};
    return mapped.contains(op);
  }

  const pb::ModelProto& model_;
  const pb::GraphProto& graph_;
  std::unordered_map<std::string, Constant> constants_;
  std::unordered_map<std::string, Source> values_;
  std::unordered_set<std::string> ids_;
  std::set<std::string> unsupported_;
  std::vector<LayerSpec> layers_;
  std::map<std::string, TensorShape> input_shapes_;
  Precision precision_ = kFP32;
  std::int64_t default_batch_ = 1;
};

}  // namespace

ModelGraph import_onnx(std::span<const std::uint8_t> bytes) {
  pb::ModelProto model;
  if (bytes.empty() || !model.ParseFromArray(bytes.data(), static_cast<int>(bytes.size()))) {
    fail(ErrorCode::DecodeError, "bytes are not a valid ONNX model");
  }
  if (!model.has_graph()) fail(ErrorCode::DecodeError, "model has no graph");
  return Importer(model).run();
}

}  // namespace edgeroof
