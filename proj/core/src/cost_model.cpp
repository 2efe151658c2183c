// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/cost_model.hpp"

#include <algorithm>
#include <initializer_list>
#include <limits>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edgeroof/error.hpp"
#include "edgeroof/format.hpp"

namespace edgeroof {

namespace {

std::int64_t mul(std::initializer_list<std::int64_t> factors) {
  std::int64_t out = 1;
  for (auto f : factors) {
    if (__builtin_mul_overflow(out, f, &out)) fail(ErrorCode::InvalidArgument, "count overflows 64 bits");
  }
  return out;
}

const TensorShape& input_shape(const ShapedLayer& l, std::size_t rank) {
  if (l.inputs.empty() || l.inputs.front().rank() == 0) fail(ErrorCode::ShapeMissing, "layer has no input shape");
  const auto& in = l.inputs.front();
  if (rank != 0 && in.rank() != rank) {
    fail(ErrorCode::ShapeMissing, "expected a rank-" + std::to_string(rank) + " input, got " + in.to_string());
  }
  return in;
}

const TensorShape& output_shape(const ShapedLayer& l) {
  if (l.output.rank() == 0) fail(ErrorCode::ShapeMissing, "layer has no output shape");
  return l.output;
}

const LayerSpec& spec_of(const ShapedLayer& l, LayerKind expected) {
  if (l.spec == nullptr) fail(ErrorCode::ShapeMissing, "shaped layer has no spec");
  if (l.spec->kind != expected) {
    fail(ErrorCode::InvalidArgument, "expected a " + std::string(to_string(expected)) + " layer, got " +
                                         std::string(to_string(l.spec->kind)));
  }
  return *l.spec;
}

struct ConvDims {
  std::int64_t n, cin, hin, win, cout, hout, wout, k, groups;
  std::int64_t cin_per_group() const { return cin / groups; }
  std::int64_t input_elems() const { return mul({n, cin, hin, win}); }
  std::int64_t output_elems() const { return mul({n, cout, hout, wout}); }
  std::int64_t weight_elems() const { return mul({cout, cin_per_group(), k, k}); }
};

ConvDims conv_dims(const ShapedLayer& l) {
  const auto& spec = spec_of(l, LayerKind::Conv2d);
  const auto& in = input_shape(l, 4);
  const auto& out = output_shape(l);
  if (out.rank() != 4) fail(ErrorCode::ShapeMissing, "conv output must be rank 4");
  return {in[0], in[1], in[2], in[3], out[1], out[2], out[3], spec.params.get_int("kernel"),
          spec.params.get_int_or("groups", 1)};
}

// Gradient of the input plus gradient of the weights, each 2 FLOP per MAC of
// the forward main term; traffic reads and writes activations and parameters
// twice, bias gradient once.
CostBreakdown parametric_backward(const CostBreakdown& fwd) {
  CostBreakdown b;
  b.flop_main = mul({2, fwd.flop_main});
  b.bytes_input = mul({2, fwd.bytes_input});
  b.bytes_output = mul({2, fwd.bytes_output});
  b.bytes_weight = mul({2, fwd.bytes_weight});
  b.bytes_bias = fwd.bytes_bias;
  return b;
}

// Parameter-free layers: same arithmetic again, activation traffic doubled.
CostBreakdown passive_backward(const CostBreakdown& fwd) {
  CostBreakdown b;
  b.flop_main = fwd.flop_main;
  b.flop_bias = fwd.flop_bias;
  b.flop_act = fwd.flop_act;
  b.bytes_input = mul({2, fwd.bytes_input});
  b.bytes_output = mul({2, fwd.bytes_output});
  return b;
}

bool extrapolated_backward(LayerKind kind) {
  switch (kind) {
    case LayerKind::LSTMCell:
    case LayerKind::Attention:
    case LayerKind::Embedding:
    case LayerKind::LayerNorm:
    case LayerKind::Softmax:
      return true;
    default:
      return false;
  }
}

CostBreakdown linear_forward(std::int64_t rows, std::int64_t d_in, std::int64_t d_out, std::int64_t c_act,
                             std::int64_t D) {
  CostBreakdown c;
  c.flop_main = mul({rows, 2, d_in, d_out});
  c.flop_bias = mul({rows, d_out});
  c.flop_act = mul({rows, d_out, c_act});
  c.bytes_input = mul({D, rows, d_in});
  c.bytes_weight = mul({D, d_in, d_out});
  c.bytes_bias = mul({D, d_out});
  c.bytes_output = mul({D, rows, d_out});
  return c;
}

CostBreakdown forward_cost(const ShapedLayer& l, Precision precision, const CostOptions& opt) {
  const auto& spec = *l.spec;
  const auto& p = spec.params;
  const std::int64_t D = precision.bytes();
  const auto& acts = opt.activations;

  switch (spec.kind) {
    case LayerKind::Conv2d:
      return conv_forward_cost(l, precision, acts);

    case LayerKind::Linear: {
      const auto& in = input_shape(l, 0);
      auto d_in = in.dims().back();
      auto d_out = output_shape(l).dims().back();
      return linear_forward(in.elements() / d_in, d_in, d_out, acts.cost(spec.activation()), D);
    }

    case LayerKind::Activation: {
      auto e = input_shape(l, 0).elements();
      CostBreakdown c;
      c.flop_act = mul({acts.cost(spec.activation()), e});
      c.bytes_input = mul({D, e});
      c.bytes_output = mul({D, e});
      return c;
    }

    case LayerKind::Pool2d: {
      const auto& in = input_shape(l, 4);
      auto window = p.get_int_or("global", 0) != 0 ? mul({in[2], in[3]}) : mul({p.get_int("kernel"), p.get_int("kernel")});
      auto e_out = output_shape(l).elements();
      CostBreakdown c;
      c.flop_main = mul({e_out, window});
      c.bytes_input = mul({D, in.elements()});
      c.bytes_output = mul({D, e_out});
      return c;
    }

    case LayerKind::BatchNorm: {
      const auto& in = input_shape(l, 0);
      auto e = in.elements();
      CostBreakdown c;
      c.flop_main = mul({2, e});
      c.bytes_input = mul({D, e});
      c.bytes_output = mul({D, e});
      c.bytes_weight = mul({D, 2, in[1]});
      return c;
    }

    case LayerKind::Elementwise: {
      auto e = output_shape(l).elements();
      auto k = static_cast<std::int64_t>(l.inputs.size());
      CostBreakdown c;
      c.flop_main = mul({std::max<std::int64_t>(1, k - 1), e});
      c.bytes_input = mul({D, k, e});
      c.bytes_output = mul({D, e});
      return c;
    }

    case LayerKind::Softmax: {
      auto e = input_shape(l, 0).elements();
      CostBreakdown c;
      c.flop_main = mul({2, e});
      c.flop_act = mul({acts.cost("exp"), e});
      c.bytes_input = mul({D, e});
      c.bytes_output = mul({D, e});
      return c;
    }

    case LayerKind::LayerNorm: {
      const auto& in = input_shape(l, 0);
      auto e = in.elements();
      CostBreakdown c;
      c.flop_main = mul({8, e});
      c.bytes_input = mul({D, e});
      c.bytes_output = mul({D, e});
      c.bytes_weight = mul({D, 2, in.dims().back()});
      return c;
    }

    case LayerKind::Embedding: {
      auto e = output_shape(l).elements();
      CostBreakdown c;
      c.bytes_input = mul({D, e});  // table rows touched
      c.bytes_output = mul({D, e});
      return c;
    }

    case LayerKind::LSTMCell: {
      const auto& in = input_shape(l, 3);
      auto n = in[0], steps = in[1], d = in[2];
      auto h = p.get_int("hidden");
      auto u = p.get_int_or("unroll", opt.lstm_unroll);
      auto gates = mul({4, h, h + d});
      CostBreakdown c;
      c.flop_main = mul({steps, n, 2 * gates + 4 * h});
      c.flop_act = mul({steps, n, 3 * acts.cost("sigmoid") + acts.cost("tanh"), h});
      c.bytes_weight = mul({D, steps, u, gates});
      c.bytes_bias = mul({D, steps, 4, h});
      c.bytes_input = mul({D, steps, n, d});
      c.bytes_output = mul({D, steps, n, 3, h});
      return c;
    }

    case LayerKind::Attention: {
      const auto& in = input_shape(l, 3);
      auto n = in[0], seq = in[1], d = in[2];
      auto heads = p.get_int("heads");
      auto d_head = d / heads;
      auto rows = mul({n, seq});
      auto proj = linear_forward(rows, d, d, 0, D);
      CostBreakdown c = proj + proj + proj + proj;
      auto scores = mul({n, heads, seq, seq});
      c.flop_main += mul({2, 2, scores, d_head}) + mul({2, scores});
      c.flop_act += mul({acts.cost("exp"), scores});
      c.bytes_input += mul({D, 3, rows, d});
      c.bytes_output += mul({D, rows, d}) + mul({D, 4, scores});
      return c;
    }

    case LayerKind::Transpose:
    case LayerKind::Concat: {
      auto e = output_shape(l).elements();
      CostBreakdown c;
      c.bytes_input = mul({D, e});
      c.bytes_output = mul({D, e});
      return c;
    }

    case LayerKind::Reshape:
      return {};
  }
  fail(ErrorCode::UnsupportedKind, std::string(to_string(spec.kind)));
}

}  // namespace

std::string_view to_string(CostMode mode) noexcept {
  return mode == CostMode::Training ? "Training" : "Inference";
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) noexcept {
  flop_main += o.flop_main;
  flop_bias += o.flop_bias;
  flop_act += o.flop_act;
  bytes_input += o.bytes_input;
  bytes_weight += o.bytes_weight;
  bytes_bias += o.bytes_bias;
  bytes_output += o.bytes_output;
  return *this;
}

ActivationCostTable::ActivationCostTable()
    : entries_{{"relu", 1}, {"sigmoid", 4}, {"tanh", 4}, {"hardswish", 3}, {"gelu", 8}, {"exp", 2}} {}

ActivationCostTable ActivationCostTable::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("activation costs: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::SchemaError, "activation costs must be a JSON object");
  ActivationCostTable table;
  for (const auto& [name, value] : doc.items()) {
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
      fail(ErrorCode::SchemaError, "activation cost '" + name + "' must be a non-negative integer");
    }
    table.set(name, value.get<std::int64_t>());
  }
  if (table.cost("relu") != 1) fail(ErrorCode::SchemaError, "activation cost 'relu' must be 1");
  return table;
}

std::int64_t ActivationCostTable::cost(std::string_view name) const {
  if (name.empty()) return 0;
  auto it = entries_.find(name);
  if (it == entries_.end()) fail(ErrorCode::UnsupportedKind, "activation '" + std::string(name) + "' has no cost entry");
  return it->second;
}

void ActivationCostTable::set(const std::string& name, std::int64_t flops) {
  if (flops < 0) fail(ErrorCode::SchemaError, "activation cost must be >= 0");
  entries_[name] = flops;
}

const LayerCost* WorkloadCost::find(std::string_view id) const {
  auto it = std::find_if(per_layer.begin(), per_layer.end(), [&](const LayerCost& c) { return c.id == id; });
  return it == per_layer.end() ? nullptr : &*it;
}

bool WorkloadCost::any_extrapolated() const {
  return std::any_of(per_layer.begin(), per_layer.end(), [](const LayerCost& c) { return c.backward_extrapolated; });
}

CostBreakdown conv_forward_cost(const ShapedLayer& layer, Precision precision, const ActivationCostTable& activations) {
  auto c = conv_dims(layer);
  const std::int64_t D = precision.bytes();
  auto out = c.output_elems();
  CostBreakdown r;
  r.flop_main = mul({out, 2, c.cin_per_group(), c.k, c.k});
  r.flop_bias = out;
  r.flop_act = mul({out, activations.cost(layer.spec->activation())});
  r.bytes_input = mul({D, c.input_elems()});
  r.bytes_weight = mul({D, c.weight_elems()});
  r.bytes_bias = mul({D, c.cout});
  r.bytes_output = mul({D, out});
  return r;
}

CostBreakdown conv_backward_cost(const ShapedLayer& layer, Precision precision) {
  auto c = conv_dims(layer);
  const std::int64_t D = precision.bytes();
  CostBreakdown r;
  r.flop_main = mul({2, c.input_elems(), c.cout / c.groups, c.k, c.k}) +
                mul({2, c.output_elems(), c.cin_per_group(), c.k, c.k});
  r.bytes_input = mul({D, 2, c.input_elems()});
  r.bytes_output = mul({D, 2, c.output_elems()});
  r.bytes_weight = mul({D, 2, c.weight_elems()});
  r.bytes_bias = mul({D, c.cout});
  return r;
}

LayerCost layer_cost(const ShapedLayer& layer, CostMode mode, Precision precision, const CostOptions& options) {
  if (layer.spec == nullptr) fail(ErrorCode::ShapeMissing, "shaped layer has no spec");
  LayerCost out;
  out.id = layer.spec->id;
  out.kind = layer.spec->kind;
  out.forward = forward_cost(layer, precision, options);
  if (mode == CostMode::Training) {
    if (out.kind == LayerKind::Conv2d) {
      out.backward = conv_backward_cost(layer, precision);
    } else if (has_parameters(out.kind)) {
      out.backward = parametric_backward(out.forward);
    } else {
      out.backward = passive_backward(out.forward);
    }
    out.backward_extrapolated = extrapolated_backward(out.kind);
  }
  return out;
}

WorkloadCost aggregate_workload(const ShapedGraph& graph, CostMode mode, Precision precision,
                                const CostOptions& options) {
  WorkloadCost w;
  w.mode = mode;
  w.batch = graph.batch();
  w.precision = precision;
  w.per_layer.reserve(graph.layers().size());
  for (const auto& layer : graph.layers()) {
    try {
      w.per_layer.push_back(layer_cost(layer, mode, precision, options));
    } catch (const Error& e) {
      throw e.with_context("layer '" + layer.spec->id + "'");
    }
    w.total += w.per_layer.back().total();
  }
  return w;
}

double arithmetic_intensity(const CostBreakdown& cost) {
  if (cost.mop() == 0) fail(ErrorCode::ZeroMemory, "arithmetic intensity undefined for Q = 0");
  return static_cast<double>(cost.flop()) / static_cast<double>(cost.mop());
}

BatchSweep batch_ai_sweep(const ModelGraph& graph, const std::vector<std::int64_t>& batches, CostMode mode,
                          Precision precision, const CostOptions& options) {
  if (batches.empty()) fail(ErrorCode::InvalidArgument, "batch list is empty");
  for (auto b : batches) {
    if (b < 1) fail(ErrorCode::InvalidArgument, "batch sizes must be >= 1");
  }
  auto shared = std::make_shared<const ModelGraph>(graph);

  BatchSweep sweep;
  auto unit = aggregate_workload(infer_shapes(shared, 1), mode, precision, options).total;
  auto io_bytes = unit.mop() - unit.param_bytes();
  sweep.ai_limit = io_bytes > 0 ? static_cast<double>(unit.flop()) / static_cast<double>(io_bytes)
                                : std::numeric_limits<double>::infinity();
  sweep.weight_fraction =
      unit.mop() > 0 ? static_cast<double>(unit.param_bytes()) / static_cast<double>(unit.mop()) : 0.0;

  for (auto b : batches) {
    auto total = b == 1 ? unit : aggregate_workload(infer_shapes(shared, b), mode, precision, options).total;
    sweep.points.push_back({b, arithmetic_intensity(total), total.flop(), total.mop()});
  }
  return sweep;
}

std::string per_layer_csv(const WorkloadCost& cost) {
  std::ostringstream out;
  out << "layer_id,kind,W_flop,Q_bytes,AI\n";
  for (const auto& l : cost.per_layer) {
    auto t = l.total();
    out << l.id << ',' << to_string(l.kind) << ',' << t.flop() << ',' << t.mop() << ',';
    if (t.mop() > 0) out << format_sig(arithmetic_intensity(t));
    out << '\n';
  }
  return out.str();
}

}  // namespace edgeroof
