// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include "edgeroof/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edgeroof/error.hpp"

namespace edgeroof {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::SchemaError, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(ErrorCode::SchemaError, "unknown field '" + key + "' in " + where);
  }
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::SchemaError, "missing field '" + key + "' in " + where);
  return *it;
}

std::int64_t as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) fail(ErrorCode::SchemaError, what + " must be an integer");
  return v.get<std::int64_t>();
}

std::vector<std::int64_t> as_int_list(const json& v, const std::string& what) {
  if (!v.is_array()) fail(ErrorCode::SchemaError, what + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& e : v) out.push_back(as_int(e, what + " element"));
  return out;
}

ParamValue as_param(const json& v, const std::string& what) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) return as_int_list(v, what);
  fail(ErrorCode::SchemaError, what + " must be an integer, integer list or string");
}

}  // namespace

ModelGraph parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
  }
  check_keys(doc, {"name", "precision", "default_batch", "inputs", "layers"}, "model document");

  const auto& name = require_key(doc, "name", "model document");
  if (!name.is_string()) fail(ErrorCode::SchemaError, "name must be a string");
  const auto& precision = require_key(doc, "precision", "model document");
  if (!precision.is_string()) fail(ErrorCode::SchemaError, "precision must be a string");
  auto default_batch = as_int(require_key(doc, "default_batch", "model document"), "default_batch");

  const auto& inputs = require_key(doc, "inputs", "model document");
  if (!inputs.is_object()) fail(ErrorCode::SchemaError, "inputs must be an object");
  std::map<std::string, TensorShape> input_shapes;
  for (const auto& [id, dims] : inputs.items()) {
    input_shapes.emplace(id, TensorShape(as_int_list(dims, "inputs." + id)));
  }

  const auto& layers_json = require_key(doc, "layers", "model document");
  if (!layers_json.is_array()) fail(ErrorCode::SchemaError, "layers must be an array");
  std::vector<LayerSpec> layers;
  for (std::size_t i = 0; i < layers_json.size(); ++i) {
    const auto& lj = layers_json[i];
    std::string where = "layers[" + std::to_string(i) + "]";
    check_keys(lj, {"id", "kind", "params", "inputs"}, where);
    LayerSpec layer;
    const auto& id = require_key(lj, "id", where);
    if (!id.is_string()) fail(ErrorCode::SchemaError, where + ".id must be a string");
    layer.id = id.get<std::string>();
    const auto& kind = require_key(lj, "kind", where);
    if (!kind.is_string()) fail(ErrorCode::SchemaError, where + ".kind must be a string");
    layer.kind = parse_layer_kind(kind.get<std::string>());
    if (auto it = lj.find("params"); it != lj.end()) {
      if (!it->is_object()) fail(ErrorCode::SchemaError, where + ".params must be an object");
      for (const auto& [key, value] : it->items()) layer.params.set(key, as_param(value, where + ".params." + key));
    }
    if (auto it = lj.find("inputs"); it != lj.end()) {
      if (!it->is_array()) fail(ErrorCode::SchemaError, where + ".inputs must be an array");
      for (const auto& in : *it) {
        if (!in.is_string()) fail(ErrorCode::SchemaError, where + ".inputs must hold strings");
        layer.inputs.push_back(in.get<std::string>());
      }
    }
    layers.push_back(std::move(layer));
  }

  return ModelGraph::create(name.get<std::string>(), Precision::parse(precision.get<std::string>()), default_batch,
                            std::move(layers), std::move(input_shapes));
}

std::string serialize_model(const ModelGraph& graph) {
  json doc;
  doc["name"] = graph.name();
  doc["precision"] = std::string(graph.precision().name());
  doc["default_batch"] = graph.default_batch();
  json inputs = json::object();
  for (const auto& [id, shape] : graph.input_shapes()) inputs[id] = shape.dims();
  doc["inputs"] = inputs;
  json layers = json::array();
  for (const auto& layer : graph.layers()) {
    json lj;
    lj["id"] = layer.id;
    lj["kind"] = std::string(to_string(layer.kind));
    json params = json::object();
    for (const auto& [key, value] : layer.params.values()) {
      std::visit([&](const auto& v) { params[key] = v; }, value);
    }
    lj["params"] = params;
    lj["inputs"] = layer.inputs;
    layers.push_back(std::move(lj));
  }
  doc["layers"] = layers;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

ModelGraph load_model_file(const std::string& path) {
  auto text = read_text_file(path);
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".onnx") == 0) {
    std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
    auto g = import_onnx(bytes);
    // Exporters tend to emit a generic graph name; the file stem is more useful in reports.
    auto stem = std::filesystem::path(path).stem().string();
    return ModelGraph::create(stem, g.precision(), g.default_batch(), g.layers(), g.input_shapes());
  }
  return parse_model(text);
}

}  // namespace edgeroof
