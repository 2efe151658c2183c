// Copyright 2026 The edgeroof Authors.
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <nlohmann/json.hpp>

#include "edgeroof/error.hpp"
#include "edgeroof/model_io.hpp"
#include "edgeroof/roofline.hpp"

namespace edgeroof {

namespace {

using json = nlohmann::ordered_json;

constexpr double kTera = 1e12;
constexpr double kGiga = 1e9;
constexpr double kPico = 1e-12;

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::SchemaError, std::string("device config: missing '") + key + "'");
  return *it;
}

double number(const json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_number()) fail(ErrorCode::SchemaError, std::string("device config: '") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t integer(const json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_number_integer()) fail(ErrorCode::SchemaError, std::string("device config: '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string text(const json& obj, const char* key) {
  const auto& v = field(obj, key);
  if (!v.is_string()) fail(ErrorCode::SchemaError, std::string("device config: '") + key + "' must be a string");
  return v.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(ErrorCode::SchemaError, where + ": unknown key '" + key + "'");
  }
}

}  // namespace

DeviceRoofline parse_device_config(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("device config: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::SchemaError, "device config must be a JSON object");
  reject_unknown(doc,
                 {"device", "mode", "precision", "peak_tflops", "peak_gbps", "eps_flop_pj", "eps_mop_pj", "static_w",
                  "provenance", "note"},
                 "device config");

  DeviceRoofline d;
  d.device = text(doc, "device");
  const auto& mode = field(doc, "mode");
  if (!mode.is_object()) fail(ErrorCode::SchemaError, "device config: 'mode' must be an object");
  reject_unknown(mode, {"cpu_cores", "cpu_mhz", "gpu_mhz", "mem_mhz"}, "device config mode");
  d.mode = {integer(mode, "cpu_cores"), integer(mode, "cpu_mhz"), integer(mode, "gpu_mhz"), integer(mode, "mem_mhz")};
  d.precision = Precision::parse(text(doc, "precision"));
  d.peak_flops = number(doc, "peak_tflops") * kTera;
  d.peak_bw = number(doc, "peak_gbps") * kGiga;
  d.eps_flop = number(doc, "eps_flop_pj") * kPico;
  d.eps_mop = number(doc, "eps_mop_pj") * kPico;
  d.static_power = number(doc, "static_w");
  if (doc.contains("provenance")) {
    auto p = text(doc, "provenance");
    if (p == "fitted") {
      d.provenance = Provenance::Fitted;
    } else if (p != "configured") {
      fail(ErrorCode::SchemaError, "device config: provenance must be 'configured' or 'fitted'");
    }
  }
  if (doc.contains("note")) d.note = text(doc, "note");
  d.validate();
  return d;
}

std::string serialize_device_config(const DeviceRoofline& d) {
  json doc;
  doc["device"] = d.device;
  doc["mode"] = {{"cpu_cores", d.mode.cpu_cores},
                 {"cpu_mhz", d.mode.cpu_mhz},
                 {"gpu_mhz", d.mode.gpu_mhz},
                 {"mem_mhz", d.mode.mem_mhz}};
  doc["precision"] = std::string(d.precision.name());
  doc["peak_tflops"] = d.peak_flops / kTera;
  doc["peak_gbps"] = d.peak_bw / kGiga;
  doc["eps_flop_pj"] = d.eps_flop / kPico;
  doc["eps_mop_pj"] = d.eps_mop / kPico;
  doc["static_w"] = d.static_power;
  doc["provenance"] = std::string(to_string(d.provenance));
  if (!d.note.empty()) doc["note"] = d.note;
  return doc.dump(2) + "\n";
}

DeviceRoofline load_device_config(const std::string& path) {
  try {
    return parse_device_config(read_text_file(path));
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

}  // namespace edgeroof
