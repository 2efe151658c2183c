// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/model_graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "edgeroof/error.hpp"

namespace edgeroof {

// ---------------------------------------------------------------------------
// Precision / TensorShape
// ---------------------------------------------------------------------------

std::string_view Precision::name() const noexcept {
  switch (kind) {
    case PrecisionKind::FP32: return "FP32";
    case PrecisionKind::TF32: return "TF32";
    case PrecisionKind::FP16: return "FP16";
    case PrecisionKind::INT8: return "INT8";
  }
  return "FP32";
}

Precision Precision::parse(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "FP32") return kFP32;
  if (upper == "TF32") return kTF32;
  if (upper == "FP16") return kFP16;
  if (upper == "INT8") return kINT8;
  fail(ErrorCode::SchemaError, "unknown precision '" + std::string(text) + "'");
}

TensorShape::TensorShape(std::vector<std::int64_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) fail(ErrorCode::SchemaError, "tensor shape must have rank >= 1");
  for (auto d : dims_) {
    if (d < 1) fail(ErrorCode::SchemaError, "tensor extent must be >= 1, got " + std::to_string(d));
  }
}

std::int64_t TensorShape::elements() const noexcept {
  std::int64_t n = dims_.empty() ? 0 : 1;
  for (auto d : dims_) n *= d;
  return n;
}

TensorShape TensorShape::with_batch(std::int64_t batch) const {
  auto dims = dims_;
  dims.at(0) = batch;
  return TensorShape(std::move(dims));
}

std::string TensorShape::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "x" : "") << dims_[i];
  return os.str();
}

// ---------------------------------------------------------------------------
// LayerKind
// ---------------------------------------------------------------------------

namespace {

constexpr std::pair<LayerKind, std::string_view> kKindNames[] = {
    {LayerKind::Conv2d, "Conv2d"},         {LayerKind::Linear, "Linear"},
    {LayerKind::Activation, "Activation"}, {LayerKind::Pool2d, "Pool2d"},
    {LayerKind::BatchNorm, "BatchNorm"},   {LayerKind::Elementwise, "Elementwise"},
    {LayerKind::Softmax, "Softmax"},       {LayerKind::LayerNorm, "LayerNorm"},
    {LayerKind::Embedding, "Embedding"},   {LayerKind::LSTMCell, "LSTMCell"},
    {LayerKind::Attention, "Attention"},   {LayerKind::Transpose, "Transpose"},
    {LayerKind::Reshape, "Reshape"},       {LayerKind::Concat, "Concat"},
};

}  // namespace

std::string_view to_string(LayerKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

LayerKind parse_layer_kind(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  fail(ErrorCode::UnknownKind, "unsupported layer kind '" + std::string(text) + "'");
}

bool has_parameters(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::Conv2d:
    case LayerKind::Linear:
    case LayerKind::BatchNorm:
    case LayerKind::LayerNorm:
    case LayerKind::Embedding:
    case LayerKind::LSTMCell:
    case LayerKind::Attention:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// LayerParams
// ---------------------------------------------------------------------------

std::int64_t LayerParams::get_int(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) fail(ErrorCode::SchemaError, "missing parameter '" + name + "'");
  if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
  fail(ErrorCode::SchemaError, "parameter '" + name + "' must be an integer");
}

std::int64_t LayerParams::get_int_or(const std::string& name, std::int64_t fallback) const {
  return contains(name) ? get_int(name) : fallback;
}

const std::vector<std::int64_t>& LayerParams::get_list(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) fail(ErrorCode::SchemaError, "missing parameter '" + name + "'");
  if (const auto* v = std::get_if<std::vector<std::int64_t>>(&it->second)) return *v;
  fail(ErrorCode::SchemaError, "parameter '" + name + "' must be an integer list");
}

std::optional<std::vector<std::int64_t>> LayerParams::find_list(const std::string& name) const {
  if (!contains(name)) return std::nullopt;
  return get_list(name);
}

std::optional<std::string> LayerParams::find_string(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) return std::nullopt;
  if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
  fail(ErrorCode::SchemaError, "parameter '" + name + "' must be a string");
}

std::string LayerSpec::activation() const { return params.find_string("activation").value_or(""); }

// ---------------------------------------------------------------------------
// Per-kind parameter schema
// ---------------------------------------------------------------------------

namespace {

enum class ParamType { Int, List, String };

struct ParamRule {
  std::string_view name;
  ParamType type;
  bool required;
};

std::vector<ParamRule> rules_for(LayerKind kind) {
  using T = ParamType;
  switch (kind) {
    case LayerKind::Conv2d:
      return {{"out_channels", T::Int, true}, {"kernel", T::Int, true},
              {"stride", T::Int, false},      {"padding", T::Int, false},
              {"dilation", T::Int, false},    {"groups", T::Int, false},
              {"activation", T::String, false}};
    case LayerKind::Linear:
      return {{"out_features", T::Int, true}, {"activation", T::String, false}};
    case LayerKind::Activation:
      return {{"activation", T::String, true}};
    case LayerKind::Pool2d:
      return {{"kernel", T::Int, false}, {"stride", T::Int, false}, {"padding", T::Int, false},
              {"global", T::Int, false}, {"mode", T::String, false}};
    case LayerKind::Elementwise:
      return {{"op", T::String, false}};
    case LayerKind::Softmax:
      return {{"axis", T::Int, false}};
    case LayerKind::Embedding:
      return {{"vocab", T::Int, true}, {"dim", T::Int, true}};
    case LayerKind::LSTMCell:
      return {{"hidden", T::Int, true}, {"unroll", T::Int, false}};
    case LayerKind::Attention:
      return {{"heads", T::Int, true}};
    case LayerKind::Transpose:
      return {{"perm", T::List, false}};
    case LayerKind::Reshape:
      return {{"shape", T::List, false}};
    case LayerKind::Concat:
      return {{"axis", T::Int, false}};
    case LayerKind::BatchNorm:
    case LayerKind::LayerNorm:
      return {};
  }
  return {};
}

void require(bool ok, const LayerSpec& layer, const std::string& what) {
  if (!ok) fail(ErrorCode::SchemaError, "layer '" + layer.id + "': " + what);
}

void validate_params(const LayerSpec& layer) {
  const auto rules = rules_for(layer.kind);
  for (const auto& [name, value] : layer.params.values()) {
    auto rule = std::find_if(rules.begin(), rules.end(), [&](const ParamRule& r) { return r.name == name; });
    require(rule != rules.end(), layer,
            "unknown parameter '" + name + "' for kind " + std::string(to_string(layer.kind)));
    bool type_ok = (rule->type == ParamType::Int && std::holds_alternative<std::int64_t>(value)) ||
                   (rule->type == ParamType::List && std::holds_alternative<std::vector<std::int64_t>>(value)) ||
                   (rule->type == ParamType::String && std::holds_alternative<std::string>(value));
    require(type_ok, layer, "parameter '" + name + "' has the wrong type");
  }
  for (const auto& rule : rules) {
    require(!rule.required || layer.params.contains(std::string(rule.name)), layer,
            "missing required parameter '" + std::string(rule.name) + "'");
  }

  const auto& p = layer.params;
  switch (layer.kind) {
    case LayerKind::Conv2d: {
      auto groups = p.get_int_or("groups", 1);
      require(p.get_int("out_channels") >= 1, layer, "out_channels must be >= 1");
      require(p.get_int("kernel") >= 1, layer, "kernel must be >= 1");
      require(p.get_int_or("stride", 1) >= 1, layer, "stride must be >= 1");
      require(p.get_int_or("padding", 0) >= 0, layer, "padding must be >= 0");
      require(p.get_int_or("dilation", 1) >= 1, layer, "dilation must be >= 1");
      require(groups >= 1, layer, "groups must be >= 1");
      require(p.get_int("out_channels") % groups == 0, layer, "out_channels must be divisible by groups");
      break;
    }
    case LayerKind::Linear:
      require(p.get_int("out_features") >= 1, layer, "out_features must be >= 1");
      break;
    case LayerKind::Pool2d: {
      bool global = p.get_int_or("global", 0) != 0;
      require(p.get_int_or("global", 0) == 0 || p.get_int_or("global", 0) == 1, layer, "global must be 0 or 1");
      require(global || p.contains("kernel"), layer, "non-global pooling requires 'kernel'");
      if (!global) {
        require(p.get_int("kernel") >= 1, layer, "kernel must be >= 1");
        require(p.get_int_or("stride", p.get_int("kernel")) >= 1, layer, "stride must be >= 1");
        require(p.get_int_or("padding", 0) >= 0, layer, "padding must be >= 0");
      }
      auto mode = p.find_string("mode").value_or("max");
      require(mode == "max" || mode == "avg", layer, "mode must be 'max' or 'avg'");
      break;
    }
    case LayerKind::Embedding:
      require(p.get_int("vocab") >= 1 && p.get_int("dim") >= 1, layer, "vocab and dim must be >= 1");
      break;
    case LayerKind::LSTMCell:
      require(p.get_int("hidden") >= 1, layer, "hidden must be >= 1");
      require(p.get_int_or("unroll", 1) >= 1, layer, "unroll must be >= 1");
      break;
    case LayerKind::Attention:
      require(p.get_int("heads") >= 1, layer, "heads must be >= 1");
      break;
    case LayerKind::Transpose:
      if (auto perm = p.find_list("perm")) {
        require(!perm->empty() && (*perm)[0] == 0, layer, "perm must keep the batch axis first");
        auto sorted = *perm;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
          require(sorted[i] == static_cast<std::int64_t>(i), layer, "perm must be a permutation of 0..rank-1");
        }
      }
      break;
    case LayerKind::Reshape:
      if (auto shape = p.find_list("shape")) {
        int inferred = 0;
        for (auto d : *shape) {
          require(d >= 1 || d == -1, layer, "reshape extents must be >= 1 or -1");
          inferred += d == -1;
        }
        require(inferred <= 1, layer, "at most one reshape extent may be -1");
      }
      break;
    default:
      break;
  }

  // Arity of non-source layers.
  if (!layer.inputs.empty()) {
    bool variadic = layer.kind == LayerKind::Elementwise || layer.kind == LayerKind::Concat;
    require(variadic || layer.inputs.size() == 1, layer,
            std::string(to_string(layer.kind)) + " takes exactly one input");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Topological order
// ---------------------------------------------------------------------------

std::vector<std::size_t> topological_indices(const std::vector<LayerSpec>& layers) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < layers.size(); ++i) index.emplace(layers[i].id, i);

  std::vector<std::size_t> indegree(layers.size(), 0);
  std::vector<std::vector<std::size_t>> consumers(layers.size());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    for (const auto& in : layers[i].inputs) {
      auto it = index.find(in);
      if (it == index.end()) {
        fail(ErrorCode::DanglingInput, "layer '" + layers[i].id + "' references undefined input '" + in + "'");
      }
      consumers[it->second].push_back(i);
      ++indegree[i];
    }
  }

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(layers.size());
  while (!ready.empty()) {
    auto i = ready.top();
    ready.pop();
    order.push_back(i);
    for (auto c : consumers[i]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != layers.size()) {
    std::string stuck;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      if (indegree[i] > 0) stuck += (stuck.empty() ? "" : ", ") + layers[i].id;
    }
    fail(ErrorCode::CyclicGraph, "cycle among layers {" + stuck + "}");
  }
  return order;
}

std::vector<std::string> topological_order(const ModelGraph& graph) {
  std::vector<std::string> ids;
  for (auto i : topological_indices(graph.layers())) ids.push_back(graph.layers()[i].id);
  return ids;
}

// ---------------------------------------------------------------------------
// ModelGraph
// ---------------------------------------------------------------------------

ModelGraph ModelGraph::create(std::string name, Precision precision, std::int64_t default_batch,
                              std::vector<LayerSpec> layers, std::map<std::string, TensorShape> input_shapes) {
  if (default_batch < 1) fail(ErrorCode::SchemaError, "default_batch must be >= 1");

  std::set<std::string_view> ids;
  for (const auto& layer : layers) {
    if (layer.id.empty()) fail(ErrorCode::SchemaError, "layer id must be non-empty");
    if (!ids.insert(layer.id).second) fail(ErrorCode::SchemaError, "duplicate layer id '" + layer.id + "'");
  }
  for (const auto& layer : layers) {
    for (const auto& in : layer.inputs) {
      if (!ids.contains(in)) {
        fail(ErrorCode::DanglingInput, "layer '" + layer.id + "' references undefined input '" + in + "'");
      }
    }
    validate_params(layer);
  }
  topological_indices(layers);  // throws CyclicGraph

  for (const auto& [id, shape] : input_shapes) {
    auto it = std::find_if(layers.begin(), layers.end(), [&](const LayerSpec& l) { return l.id == id; });
    if (it == layers.end()) fail(ErrorCode::SchemaError, "input shape given for unknown layer '" + id + "'");
    if (!it->is_source()) fail(ErrorCode::SchemaError, "input shape given for non-source layer '" + id + "'");
    if (shape.rank() == 0) fail(ErrorCode::SchemaError, "input shape for '" + id + "' is empty");
  }
  for (const auto& layer : layers) {
    if (layer.is_source() && !input_shapes.contains(layer.id)) {
      fail(ErrorCode::SchemaError, "source layer '" + layer.id + "' has no entry in inputs");
    }
  }

  ModelGraph g;
  g.name_ = std::move(name);
  g.precision_ = precision;
  g.default_batch_ = default_batch;
  g.layers_ = std::move(layers);
  g.input_shapes_ = std::move(input_shapes);
  return g;
}

std::optional<std::size_t> ModelGraph::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    if (layers_[i].id == id) return i;
  }
  return std::nullopt;
}

const LayerSpec& ModelGraph::layer(std::string_view id) const {
  auto i = index_of(id);
  if (!i) fail(ErrorCode::SchemaError, "no layer '" + std::string(id) + "'");
  return layers_[*i];
}

}  // namespace edgeroof
